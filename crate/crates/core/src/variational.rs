//! Euler–Lagrange operator, first variational formula, Noether currents and
//! the conservation law of the modified current for Lagrangians that are
//! gauge invariant only up to a total derivative.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use crate::chern_simons::{cs_form, cs_lagrangian, CsData};
use crate::error::{Error, Result};
use crate::forms::{Chart, ExteriorForm, VectorField};
use crate::gauge::GaugeGenerator;
use crate::jet::{contact_form, horizontal_projection, prolong, total_derivative, JetContext};
use crate::report::VerificationReport;
use crate::symbolic::{Indeterminate, Kind, Polynomial};

/// First-order Lagrangian `L = ℒ ω`, stored through its density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lagrangian {
    base_dim: usize,
    density: Polynomial,
}

impl Lagrangian {
    /// Fails with `NotFirstOrder` if the density involves jets of order two
    /// or more.
    pub fn new(base_dim: usize, density: Polynomial) -> Result<Self> {
        if let Some(v) = density.variables().into_iter().find(|v| v.is_field_jet() && v.order() > 1) {
            return Err(Error::NotFirstOrder(v.to_string()));
        }
        if density.mentions(Indeterminate::t()) {
            return Err(Error::Unsupported("Lagrangian depends on the homotopy parameter t".into()));
        }
        Ok(Lagrangian { base_dim, density })
    }

    /// Reads the density off a horizontal top-degree form.
    pub fn from_form(form: &ExteriorForm) -> Result<Self> {
        let n = form.chart().base_dim();
        if form.degree() != n {
            return Err(Error::DegreeMismatch { expected: n, found: form.degree() });
        }
        if let Some((b, _)) = form.terms().find(|(b, _)| b.iter().any(|c| c.kind() != Kind::BaseCoord)) {
            let c = b.iter().find(|c| c.kind() != Kind::BaseCoord).expect("found above");
            return Err(Error::NotHorizontal(c.to_string()));
        }
        Self::new(n, form.top_coefficient())
    }

    pub fn zero(base_dim: usize) -> Self {
        Lagrangian { base_dim, density: Polynomial::zero() }
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn density(&self) -> &Polynomial {
        &self.density
    }

    pub fn to_form(&self, chart: Chart) -> ExteriorForm {
        ExteriorForm::volume(chart).mul_function(&self.density)
    }
}

impl Add<&Lagrangian> for &Lagrangian {
    type Output = Lagrangian;
    fn add(self, rhs: &Lagrangian) -> Lagrangian {
        assert_eq!(self.base_dim, rhs.base_dim, "Lagrangians over different bases");
        Lagrangian { base_dim: self.base_dim, density: &self.density + &rhs.density }
    }
}

/// Horizontal `(n−1)`-form `𝔍 = 𝔍^λ ω_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Current {
    components: Vec<Polynomial>,
}

impl Current {
    pub fn zero(base_dim: usize) -> Self {
        Current { components: vec![Polynomial::zero(); base_dim] }
    }

    pub fn new(components: Vec<Polynomial>) -> Self {
        Current { components }
    }

    /// Components of a horizontal `(n−1)`-form in the basis `ω_λ`.
    pub fn from_form(form: &ExteriorForm) -> Result<Self> {
        let n = form.chart().base_dim();
        if form.degree() + 1 != n {
            return Err(Error::DegreeMismatch { expected: n - 1, found: form.degree() });
        }
        if !form.is_horizontal() {
            let c = form
                .terms()
                .flat_map(|(b, _)| b.iter())
                .find(|c| c.kind() != Kind::BaseCoord)
                .expect("not horizontal");
            return Err(Error::NotHorizontal(c.to_string()));
        }
        let components = (0..n)
            .map(|l| {
                let basis: Vec<Indeterminate> = (0..n).filter(|&m| m != l).map(Indeterminate::x).collect();
                let c = form.coefficient(&basis);
                if l % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        Ok(Current { components })
    }

    pub fn base_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, lambda: usize) -> &Polynomial {
        &self.components[lambda]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn to_form(&self, chart: Chart) -> ExteriorForm {
        let mut out = ExteriorForm::zero(chart, chart.base_dim() - 1);
        for (l, c) in self.components.iter().enumerate() {
            out += &ExteriorForm::volume_contracted(chart, l).mul_function(c);
        }
        out
    }

    /// Density of `d_H 𝔍`, i.e. `d_λ 𝔍^λ`.
    pub fn divergence(&self, ctx: &JetContext) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (l, c) in self.components.iter().enumerate() {
            out += total_derivative(c, l, ctx)?;
        }
        Ok(out)
    }
}

impl Add<&Current> for &Current {
    type Output = Current;
    fn add(self, rhs: &Current) -> Current {
        assert_eq!(self.base_dim(), rhs.base_dim());
        Current { components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&Current> for &Current {
    type Output = Current;
    fn sub(self, rhs: &Current) -> Current {
        assert_eq!(self.base_dim(), rhs.base_dim());
        Current { components: self.components.iter().zip(&rhs.components).map(|(a, b)| a - b).collect() }
    }
}

/// One line per component, `J^λ : <polynomial>`.
impl fmt::Display for Current {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, c) in self.components.iter().enumerate() {
            if l > 0 {
                writeln!(f)?;
            }
            write!(f, "J^{l} : {c}")?;
        }
        Ok(())
    }
}

/// Euler–Lagrange components `δ_iℒ`, keyed by field coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElResult {
    components: BTreeMap<Indeterminate, Polynomial>,
}

impl ElResult {
    pub fn component(&self, field: Indeterminate) -> &Polynomial {
        &self.components[&field]
    }

    pub fn components(&self) -> impl Iterator<Item = (&Indeterminate, &Polynomial)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(Polynomial::is_zero)
    }

    /// `Σ u^i δ_iℒ`.
    pub fn pair(&self, u: &VectorField) -> Polynomial {
        let mut out = Polynomial::zero();
        for (v, e) in &self.components {
            let c = u.component(*v);
            if !c.is_zero() {
                out += &c * e;
            }
        }
        out
    }
}

impl Sub<&ElResult> for &ElResult {
    type Output = ElResult;
    fn sub(self, rhs: &ElResult) -> ElResult {
        let mut components = self.components.clone();
        for (k, v) in &rhs.components {
            let e = components.entry(*k).or_default();
            *e -= v;
        }
        ElResult { components }
    }
}

/// One line per field coordinate, `d/d<field> : <polynomial>`.
impl fmt::Display for ElResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (v, e)) in self.components.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "d/d{v} : {e}")?;
        }
        Ok(())
    }
}

fn momentum(l: &Lagrangian, field: Indeterminate, lambda: usize) -> Polynomial {
    l.density.partial(field.derive(lambda).expect("order-0 field"))
}

/// `δ_iℒ = ∂_iℒ − d_λ ∂^λ_iℒ` for every order-0 field coordinate of `ctx`.
pub fn euler_lagrange(l: &Lagrangian, ctx: &JetContext) -> Result<ElResult> {
    let mut components = BTreeMap::new();
    for y in ctx.field_coordinates() {
        let mut e = l.density.partial(y);
        for lambda in 0..ctx.base_dim() {
            let p = momentum(l, y, lambda);
            if !p.is_zero() {
                e -= total_derivative(&p, lambda, ctx)?;
            }
        }
        components.insert(y, e);
    }
    Ok(ElResult { components })
}

/// `H_L = ℒω + ∂^λ_iℒ θ^i∧ω_λ`.
pub fn poincare_cartan(l: &Lagrangian, ctx: &JetContext) -> Result<ExteriorForm> {
    let chart = ctx.chart();
    let mut out = l.to_form(chart);
    for y in ctx.field_coordinates() {
        for lambda in 0..ctx.base_dim() {
            let p = momentum(l, y, lambda);
            if p.is_zero() {
                continue;
            }
            let theta = contact_form(y, ctx)?;
            out += &theta.wedge(&ExteriorForm::volume_contracted(chart, lambda)).mul_function(&p);
        }
    }
    Ok(out)
}

fn check_vertical(u: &VectorField) -> Result<()> {
    for (v, _) in u.components() {
        if !v.is_field_jet() || v.order() != 0 {
            return Err(Error::NotVertical(v.to_string()));
        }
    }
    Ok(())
}

/// `𝔍^λ = u^i ∂^λ_iℒ`.
pub fn noether_current(l: &Lagrangian, u: &VectorField, ctx: &JetContext) -> Result<Current> {
    check_vertical(u)?;
    let mut components = vec![Polynomial::zero(); ctx.base_dim()];
    for (y, c) in u.components() {
        for (lambda, comp) in components.iter_mut().enumerate() {
            let p = momentum(l, *y, lambda);
            if !p.is_zero() {
                *comp += c * &p;
            }
        }
    }
    Ok(Current { components })
}

/// Density of `𝐋_{J¹u}L = (u^i∂_iℒ + d_λu^i ∂^λ_iℒ)ω`.
pub fn lie_derivative_lagrangian(l: &Lagrangian, u: &VectorField, ctx: &JetContext) -> Result<Polynomial> {
    check_vertical(u)?;
    let j1 = prolong(u, 1, ctx)?;
    let mut out = Polynomial::zero();
    for (v, c) in j1.components() {
        let p = l.density.partial(*v);
        if !p.is_zero() {
            out += c * &p;
        }
    }
    Ok(out)
}

/// `𝐋_{J¹u}L − u^iδ_iℒ ω − d_H𝔍` for a given current.
pub fn first_variational_residual(
    l: &Lagrangian,
    u: &VectorField,
    current: &Current,
    ctx: &JetContext,
) -> Result<Polynomial> {
    let lie = lie_derivative_lagrangian(l, u, ctx)?;
    let el = euler_lagrange(l, ctx)?;
    Ok(&(&lie - &el.pair(u)) - &current.divergence(ctx)?)
}

/// Checks the first variational formula with the Noether current of `u`.
pub fn first_variational_check(l: &Lagrangian, u: &VectorField, ctx: &JetContext) -> VerificationReport {
    let check = "first variational formula";
    let result = noether_current(l, u, ctx).and_then(|j| first_variational_residual(l, u, &j, ctx));
    match result {
        Ok(r) => VerificationReport::from_polynomials(check, [("density".to_string(), &r)]),
        Err(e) => VerificationReport::error(check, e.to_string()),
    }
}

/// Section the fiber homotopy contracts onto.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum HomotopyCenter {
    /// `a = 0`.
    #[default]
    Zero,
    /// `a = B`.
    Background,
}

/// Primitive `ψ` of a closed form on the bundle by the fiberwise homotopy
/// `y ↦ c + t(y − c)` onto the center section `c`:
/// `ψ = ∫₀¹ ∂_t ⌋ H*ω dt`.
///
/// Fails with `NotClosed` if `dω ≠ 0`, and with `NonzeroResidual` if
/// `dψ ≠ ω`, i.e. the pull-back of `ω` to the center section does not
/// vanish.
pub fn fiber_homotopy(omega: &ExteriorForm, center: HomotopyCenter) -> Result<ExteriorForm> {
    if omega.degree() == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let d = omega.exterior_d()?;
    if !d.is_zero() {
        return Err(Error::NotClosed { terms: d.monomial_count(), residual: d.to_string() });
    }
    let chart = omega.chart();
    if chart.has_aux_t() {
        return Err(Error::Unsupported("form already depends on the homotopy coordinate t".into()));
    }
    let tchart = chart.with_aux_t();
    let t = Polynomial::var(Indeterminate::t());
    let one_minus_t = &Polynomial::one() - &t;
    let center_of = |y: Indeterminate| -> Polynomial {
        match (center, y.kind()) {
            (HomotopyCenter::Background, Kind::ConnJet) => {
                Polynomial::var(Indeterminate::b(y.fiber(), y.comp(), &[]).with_deriv(y.deriv()))
            }
            _ => Polynomial::zero(),
        }
    };
    let mut values = BTreeMap::new();
    for y in chart.coordinates() {
        if y.is_field_jet() {
            let c = center_of(y);
            values.insert(y, &c + &(&t * &(&Polynomial::var(y) - &c)));
        }
    }
    let lifted = omega.on_chart(tchart)?;
    let pulled = lifted.pull_back(tchart, &values, |y| {
        if !y.is_field_jet() {
            return Ok(None);
        }
        let c = center_of(y);
        let mut img = ExteriorForm::differential(tchart, y)?.mul_function(&t);
        img += &ExteriorForm::differential(tchart, Indeterminate::t())?.mul_function(&(&Polynomial::var(y) - &c));
        if !c.is_zero() {
            let dc = ExteriorForm::scalar(tchart, c).exterior_d()?;
            img += &dc.mul_function(&one_minus_t);
        }
        Ok(Some(img))
    })?;
    let psi = pulled
        .contract(&VectorField::coordinate(Indeterminate::t()))
        .map_coefficients(|p| Ok(p.integrate_t()))?
        .on_chart(chart)?;
    let residual = &psi.exterior_d()? - omega;
    if !residual.is_zero() {
        return Err(Error::NonzeroResidual { terms: residual.monomial_count(), residual: residual.to_string() });
    }
    Ok(psi)
}

/// Boundary term of a Chern–Simons Lagrangian under a gauge generator.
#[derive(Clone, Debug)]
pub struct BoundaryTerm {
    /// Primitive of `ξ_C⌋d𝔖` on the bundle.
    pub psi: ExteriorForm,
    /// `h₀(ξ_C⌋𝔖)`.
    pub contracted: Current,
    /// `σ = h₀(ψ + ξ_C⌋𝔖)`.
    pub sigma: Current,
}

/// `σ = h₀(ψ + ξ_C⌋𝔖₂ₖ₋₁(B))` with `dψ = ξ_C⌋d𝔖₂ₖ₋₁(B)`, verified
/// against `d_Hσ = 𝐋_{J¹ξ_C}𝒮₂ₖ₋₁(B)`.
pub fn sigma_boundary_term(cs: &CsData, generator: &GaugeGenerator, center: HomotopyCenter) -> Result<BoundaryTerm> {
    let ctx = cs.ctx();
    let xi = generator.field();
    let s = cs_form(cs);
    let omega = s.exterior_d()?.contract(xi);
    let psi = if omega.is_zero() {
        ExteriorForm::zero(cs.bundle_chart(), omega.degree() - 1)
    } else {
        fiber_homotopy(&omega, center)?
    };
    let xs = s.contract(xi);
    let contracted = Current::from_form(&horizontal_projection(&xs, ctx)?)?;
    let sigma = &Current::from_form(&horizontal_projection(&psi, ctx)?)? + &contracted;

    let lie = lie_derivative_lagrangian(&cs_lagrangian(cs)?, xi, ctx)?;
    let residual = &sigma.divergence(ctx)? - &lie;
    if !residual.is_zero() {
        return Err(Error::SigmaMismatch { terms: residual.len(), residual: residual.to_string() });
    }
    Ok(BoundaryTerm { psi, contracted, sigma })
}

/// Strong form of the conservation law, `d_H(𝔍_u − σ) + u^iδ_iℒ ω = 0`.
/// Returns the report and the modified current `𝔍_u − σ`.
pub fn conservation_check(
    l: &Lagrangian,
    u: &VectorField,
    sigma: &Current,
    ctx: &JetContext,
) -> Result<(VerificationReport, Current)> {
    let current = noether_current(l, u, ctx)?;
    let modified = &current - sigma;
    let el = euler_lagrange(l, ctx)?;
    let residual = &modified.divergence(ctx)? + &el.pair(u);
    let report = VerificationReport::from_polynomials("conservation of the modified current", [(
        "density".to_string(),
        &residual,
    )])
    .with_count("current monomials", modified.components().iter().map(Polynomial::len).sum())
    .with_count("euler-lagrange monomials", el.components().map(|(_, e)| e.len()).sum());
    Ok((report, modified))
}

/// Everything produced by the conservation check of a CS model.
#[derive(Clone, Debug)]
pub struct CsConservation {
    pub lagrangian: Lagrangian,
    pub boundary: BoundaryTerm,
    pub report: VerificationReport,
    /// `𝔍_CS − σ`.
    pub modified: Current,
}

/// Builds `𝒮₂ₖ₋₁(B)`, its boundary term along `generator` and checks
/// conservation of the modified current.
pub fn cs_conservation(cs: &CsData, generator: &GaugeGenerator, center: HomotopyCenter) -> Result<CsConservation> {
    let lagrangian = cs_lagrangian(cs)?;
    let boundary = sigma_boundary_term(cs, generator, center)?;
    let (report, modified) = conservation_check(&lagrangian, generator.field(), &boundary.sigma, cs.ctx())?;
    Ok(CsConservation { lagrangian, boundary, report, modified })
}

/// Gauge variation `δz^A` of a matter field, linear in `ξ^r` and its
/// derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatterRule {
    pub field: usize,
    pub variation: Polynomial,
}

/// `ξ_C` extended by the matter variations.
pub fn matter_extended_generator(generator: &GaugeGenerator, rules: &[MatterRule]) -> Result<VectorField> {
    let mut u = generator.field().clone();
    for rule in rules {
        for (m, _) in rule.variation.terms() {
            let xi_degree: u32 = m
                .factors()
                .iter()
                .filter(|(v, _)| v.kind() == Kind::GaugeParam)
                .map(|(_, e)| *e)
                .sum();
            if xi_degree != 1 {
                return Err(Error::Unsupported(format!(
                    "variation of z^{} is not linear in the gauge parameters",
                    rule.field
                )));
            }
        }
        u.add_component(Indeterminate::z(rule.field, &[]), &rule.variation);
    }
    Ok(u)
}

/// Adds a gauge-invariant Lagrangian with matter to the CS model: checks
/// `𝐋_{J¹u}L_inv = 0` and runs the conservation check on `L_CS + L_inv`.
/// The returned current is `𝔍_CS + 𝔍_inv − σ`.
pub fn invariant_sector(
    l_cs: &Lagrangian,
    l_inv: &Lagrangian,
    generator: &GaugeGenerator,
    rules: &[MatterRule],
    sigma: &Current,
    ctx: &JetContext,
) -> Result<(VerificationReport, Current)> {
    let u = matter_extended_generator(generator, rules)?;
    let lie = lie_derivative_lagrangian(l_inv, &u, ctx)?;
    if !lie.is_zero() {
        return Err(Error::NotInvariant { terms: lie.len(), residual: lie.to_string() });
    }
    conservation_check(&(l_cs + l_inv), &u, sigma, ctx)
}
