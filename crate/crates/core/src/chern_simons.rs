//! Canonical curvature of the connection bundle, characteristic forms, the
//! transgression form with a background connection and the resulting
//! Chern–Simons Lagrangian.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::{Chart, ExteriorForm};
use crate::gauge::{check_invariant_tensor, gauge_generator, InvariantTensor, LieAlgebra};
use crate::report::VerificationReport;
use crate::jet::{horizontal_projection, JetContext};
use crate::symbolic::{Indeterminate, Polynomial, Rational};
use crate::variational::Lagrangian;

/// Background section `B` entering the transgression form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Background {
    /// `B = 0`, the local CS form.
    Zero,
    /// Generic `B^r_μ(x)` kept as function symbols.
    Symbolic,
}

/// A Chern–Simons model: algebra, invariant tensor of degree `k` and a base
/// of dimension `2k − 1`.
#[derive(Clone, Debug)]
pub struct CsData {
    algebra: LieAlgebra,
    invariant: InvariantTensor,
    background: Background,
    ctx: JetContext,
}

impl CsData {
    /// Validates the tensor (degree `k ≥ 2`, ad-invariance) and builds the
    /// jet context over a `(2k − 1)`-dimensional base.
    pub fn new(
        algebra: LieAlgebra,
        invariant: InvariantTensor,
        background: Background,
        jet_order: usize,
    ) -> Result<Self> {
        let report = check_invariant_tensor(&algebra, &invariant);
        if !report.passed() {
            return Err(Error::NotAdInvariant(report.residual.join("; ")));
        }
        Self::new_unchecked(algebra, invariant, background, jet_order)
    }

    /// Like [`new`](Self::new) but skips the ad-invariance check, so that
    /// identities can be exercised on deliberately broken tensors.
    pub fn new_unchecked(
        algebra: LieAlgebra,
        invariant: InvariantTensor,
        background: Background,
        jet_order: usize,
    ) -> Result<Self> {
        let k = invariant.degree();
        if k < 2 {
            return Err(Error::InvalidTensor(format!("Chern-Simons forms need degree k > 1, got {k}")));
        }
        if invariant.dim() != algebra.dim() {
            return Err(Error::InvalidTensor(format!(
                "tensor dimension {} does not match algebra dimension {}",
                invariant.dim(),
                algebra.dim()
            )));
        }
        let ctx = JetContext::connection(2 * k - 1, algebra.dim(), jet_order)?;
        Ok(CsData { algebra, invariant, background, ctx })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn invariant(&self) -> &InvariantTensor {
        &self.invariant
    }

    pub fn background(&self) -> Background {
        self.background
    }

    pub fn k(&self) -> usize {
        self.invariant.degree()
    }

    pub fn base_dim(&self) -> usize {
        self.ctx.base_dim()
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    /// Chart of the connection bundle itself: `x^λ`, `a^r_μ`.
    pub fn bundle_chart(&self) -> Chart {
        Chart::new(self.base_dim(), self.algebra.dim(), 0, 0)
    }

    /// Same data with another background.
    pub fn with_background(&self, background: Background) -> Self {
        CsData { background, ..self.clone() }
    }

    /// `B^r_μ`, or zero.
    pub fn background_potential(&self, r: usize, mu: usize) -> Polynomial {
        match self.background {
            Background::Zero => Polynomial::zero(),
            Background::Symbolic => Polynomial::var(Indeterminate::b(r, mu, &[])),
        }
    }

    /// `dB^r_μ = ∂_λB^r_μ dx^λ` on the bundle chart.
    pub fn background_differential(&self, r: usize, mu: usize) -> ExteriorForm {
        let chart = self.bundle_chart();
        let mut out = ExteriorForm::zero(chart, 1);
        if self.background == Background::Symbolic {
            for l in 0..self.base_dim() {
                out += &dx_times(chart, Polynomial::var(Indeterminate::b(r, mu, &[l])), l);
            }
        }
        out
    }
}

fn dx_times(chart: Chart, f: Polynomial, lambda: usize) -> ExteriorForm {
    ExteriorForm::monomial(chart, f, &[Indeterminate::x(lambda)]).expect("base coordinate")
}

/// `𝔉^r = dA^r_μ∧dx^μ + ½c^r_{pq}A^p_λA^q_μ dx^λ∧dx^μ` for a potential
/// `A[r][μ]` with differentials `dA[r][μ]`.
fn curvature_from(
    alg: &LieAlgebra,
    chart: Chart,
    pot: &[Vec<Polynomial>],
    dpot: &[Vec<ExteriorForm>],
) -> Vec<ExteriorForm> {
    let n = chart.base_dim();
    let half = Rational::new(1, 2);
    let constants = alg.nonzero_constants();
    (0..alg.dim())
        .map(|r| {
            let mut f = ExteriorForm::zero(chart, 2);
            for mu in 0..n {
                f += &dpot[r][mu].wedge(&dx_times(chart, Polynomial::one(), mu));
            }
            for (rr, p, q, c) in &constants {
                if *rr != r {
                    continue;
                }
                for l in 0..n {
                    for mu in 0..n {
                        if l == mu {
                            continue;
                        }
                        let coeff = (&pot[*p][l] * &pot[*q][mu]).scale(&(c * &half));
                        let term = ExteriorForm::monomial(chart, coeff, &[Indeterminate::x(l), Indeterminate::x(mu)])
                            .expect("base coordinates");
                        f += &term;
                    }
                }
            }
            f
        })
        .collect()
}

fn multiplicity(sorted: &[usize]) -> Rational {
    let mut count = 1i64;
    let mut denom = 1i64;
    let mut run = 0i64;
    for (i, s) in sorted.iter().enumerate() {
        count *= i as i64 + 1;
        run = if i > 0 && sorted[i - 1] == *s { run + 1 } else { 1 };
        denom *= run;
    }
    Rational::new(count, denom)
}

fn sorted_tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let start = t.last().copied().unwrap_or(0);
                (start..dim).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Wedge products `𝔉^{s_1}∧⋯∧𝔉^{s_j}` of even forms, memoized by sorted prefix.
struct ProductCache<'a> {
    factors: &'a [ExteriorForm],
    memo: BTreeMap<Vec<usize>, ExteriorForm>,
}

impl<'a> ProductCache<'a> {
    fn new(factors: &'a [ExteriorForm]) -> Self {
        ProductCache { factors, memo: BTreeMap::new() }
    }

    fn product(&mut self, idx: &[usize], chart: Chart) -> ExteriorForm {
        if idx.is_empty() {
            return ExteriorForm::scalar(chart, Polynomial::one());
        }
        if let Some(p) = self.memo.get(idx) {
            return p.clone();
        }
        let (last, head) = idx.split_last().expect("nonempty");
        let p = self.product(head, chart).wedge(&self.factors[*last]);
        self.memo.insert(idx.to_vec(), p.clone());
        p
    }
}

/// `b_{r₁…r_k} α^{r₁}∧𝔉^{r₂}∧⋯∧𝔉^{r_k}` when `first` is given, otherwise
/// `b_{r₁…r_k} 𝔉^{r₁}∧⋯∧𝔉^{r_k}`. The `𝔉` must be 2-forms.
fn invariant_product(
    b: &InvariantTensor,
    chart: Chart,
    first: Option<&[ExteriorForm]>,
    curv: &[ExteriorForm],
) -> ExteriorForm {
    let k = b.degree();
    let m = b.dim();
    let mut cache = ProductCache::new(curv);
    match first {
        None => {
            let mut out = ExteriorForm::zero(chart, 2 * k);
            for s in sorted_tuples(m, k) {
                let v = b.get(&s);
                if v.is_zero() {
                    continue;
                }
                out += &cache.product(&s, chart).scale(&(v * &multiplicity(&s)));
            }
            out
        }
        Some(alpha) => {
            let degree = alpha.first().map_or(1, ExteriorForm::degree) + 2 * (k - 1);
            let mut out = ExteriorForm::zero(chart, degree);
            for (r1, a) in alpha.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut inner = ExteriorForm::zero(chart, 2 * (k - 1));
                for s in sorted_tuples(m, k - 1) {
                    let mut idx = vec![r1];
                    idx.extend_from_slice(&s);
                    let v = b.get(&idx);
                    if v.is_zero() {
                        continue;
                    }
                    inner += &cache.product(&s, chart).scale(&(v * &multiplicity(&s)));
                }
                out += &a.wedge(&inner);
            }
            out
        }
    }
}

/// `𝔉^r` on the connection bundle, one 2-form per algebra index.
pub fn canonical_curvature(cs: &CsData) -> Vec<ExteriorForm> {
    let chart = cs.bundle_chart();
    let n = cs.base_dim();
    let m = cs.algebra().dim();
    let pot: Vec<Vec<Polynomial>> =
        (0..m).map(|r| (0..n).map(|mu| Polynomial::var(Indeterminate::a(r, mu))).collect()).collect();
    let dpot: Vec<Vec<ExteriorForm>> = (0..m)
        .map(|r| {
            (0..n)
                .map(|mu| ExteriorForm::differential(chart, Indeterminate::a(r, mu)).expect("bundle coordinate"))
                .collect()
        })
        .collect();
    curvature_from(cs.algebra(), chart, &pot, &dpot)
}

/// `ℱ^r_{λμ} = a^r_{λμ} − a^r_{μλ} + c^r_{pq}a^p_λa^q_μ`, where
/// `a^r_{λμ}` is the jet coordinate `∂_λ a^r_μ`.
pub fn field_strength(alg: &LieAlgebra, r: usize, lambda: usize, mu: usize) -> Polynomial {
    let mut f = &Polynomial::var(Indeterminate::a_jet(r, mu, &[lambda]))
        - &Polynomial::var(Indeterminate::a_jet(r, lambda, &[mu]));
    for (rr, p, q, c) in alg.nonzero_constants() {
        if rr == r {
            f += (&Polynomial::var(Indeterminate::a(p, lambda)) * &Polynomial::var(Indeterminate::a(q, mu))).scale(&c);
        }
    }
    f
}

/// `F(B)^r_{λμ} = ∂_λB^r_μ − ∂_μB^r_λ + c^r_{pq}B^p_λB^q_μ`.
pub fn background_strength(alg: &LieAlgebra, r: usize, lambda: usize, mu: usize) -> Polynomial {
    let mut f = &Polynomial::var(Indeterminate::b(r, mu, &[lambda]))
        - &Polynomial::var(Indeterminate::b(r, lambda, &[mu]));
    for (rr, p, q, c) in alg.nonzero_constants() {
        if rr == r {
            f += (&Polynomial::var(Indeterminate::b(p, lambda, &[])) * &Polynomial::var(Indeterminate::b(q, mu, &[])))
                .scale(&c);
        }
    }
    f
}

/// `ℱ^r = ½ℱ^r_{λμ}dx^λ∧dx^μ` on the jet chart.
pub fn strength_horizontal(cs: &CsData) -> Result<Vec<ExteriorForm>> {
    let chart = cs.ctx().chart();
    if chart.jet_order() < 1 {
        return Err(Error::JetOrderExceeded { symbol: "a".into(), max: 0 });
    }
    let n = cs.base_dim();
    Ok((0..cs.algebra().dim())
        .map(|r| {
            let mut f = ExteriorForm::zero(chart, 2);
            for l in 0..n {
                for mu in (l + 1)..n {
                    let term = ExteriorForm::monomial(
                        chart,
                        field_strength(cs.algebra(), r, l, mu),
                        &[Indeterminate::x(l), Indeterminate::x(mu)],
                    )
                    .expect("base coordinates");
                    f += &term;
                }
            }
            f
        })
        .collect())
}

/// `P₂ₖ(𝔉) = b_{r₁…r_k}𝔉^{r₁}∧⋯∧𝔉^{r_k}`.
pub fn characteristic_form(cs: &CsData) -> ExteriorForm {
    invariant_product(cs.invariant(), cs.bundle_chart(), None, &canonical_curvature(cs))
}

/// `P₂ₖ(F_B)`: pull-back of `P₂ₖ(𝔉)` along `a ↦ B`, viewed on the bundle.
pub fn characteristic_at_b(cs: &CsData) -> Result<ExteriorForm> {
    let chart = cs.bundle_chart();
    let p = characteristic_form(cs);
    let mut values = BTreeMap::new();
    for r in 0..cs.algebra().dim() {
        for mu in 0..cs.base_dim() {
            values.insert(Indeterminate::a(r, mu), cs.background_potential(r, mu));
        }
    }
    p.pull_back(chart, &values, |c| {
        if c.is_field_jet() {
            Ok(Some(cs.background_differential(c.fiber(), c.comp())))
        } else {
            Ok(None)
        }
    })
}

/// `𝔖₂ₖ₋₁(B) = k∫₀¹ b(a − B)dx∧𝔉(t,B)∧⋯∧𝔉(t,B) dt`.
pub fn cs_form(cs: &CsData) -> ExteriorForm {
    let chart = cs.bundle_chart();
    let n = cs.base_dim();
    let m = cs.algebra().dim();
    let t = Polynomial::var(Indeterminate::t());
    let one_minus_t = &Polynomial::one() - &t;
    let mut pot = Vec::with_capacity(m);
    let mut dpot = Vec::with_capacity(m);
    let mut alpha = Vec::with_capacity(m);
    for r in 0..m {
        let mut pr = Vec::with_capacity(n);
        let mut dr = Vec::with_capacity(n);
        let mut ar = ExteriorForm::zero(chart, 1);
        for mu in 0..n {
            let a = Polynomial::var(Indeterminate::a(r, mu));
            let b = cs.background_potential(r, mu);
            pr.push(&(&t * &a) + &(&one_minus_t * &b));
            let da = ExteriorForm::differential(chart, Indeterminate::a(r, mu)).expect("bundle coordinate");
            let mut d = da.mul_function(&t);
            d += &cs.background_differential(r, mu).mul_function(&one_minus_t);
            dr.push(d);
            ar += &dx_times(chart, &a - &b, mu);
        }
        pot.push(pr);
        dpot.push(dr);
        alpha.push(ar);
    }
    let curv = curvature_from(cs.algebra(), chart, &pot, &dpot);
    let k = Rational::from_int(cs.k() as i64);
    invariant_product(cs.invariant(), chart, Some(&alpha), &curv)
        .map_coefficients(|p| Ok(p.integrate_t().scale(&k)))
        .expect("integration cannot fail")
}

/// `𝒮₂ₖ₋₁(B) = h₀𝔖₂ₖ₋₁(B)` as a Lagrangian on the jet space.
pub fn cs_lagrangian(cs: &CsData) -> Result<Lagrangian> {
    let h = horizontal_projection(&cs_form(cs), cs.ctx())?;
    Lagrangian::from_form(&h)
}

/// `𝒮₂ₖ₋₁(B) = k∫₀¹ b(a − B)dx∧ℱ(t,B)∧⋯ dt` assembled directly from the
/// interpolated horizontal strengths
/// `ℱ^r(t,B) = ½[t(a_{λμ} − a_{μλ}) + (1 − t)(∂_λB_μ − ∂_μB_λ) + c A^p_λA^q_μ]dx^λ∧dx^μ`
/// with `A = ta + (1 − t)B`.
pub fn cs_lagrangian_explicit(cs: &CsData) -> Result<Lagrangian> {
    let chart = cs.ctx().chart();
    let n = cs.base_dim();
    let m = cs.algebra().dim();
    let t = Polynomial::var(Indeterminate::t());
    let one_minus_t = &Polynomial::one() - &t;
    let sym = cs.background == Background::Symbolic;
    let interp = |r: usize, mu: usize| {
        &(&t * &Polynomial::var(Indeterminate::a(r, mu))) + &(&one_minus_t * &cs.background_potential(r, mu))
    };
    let mut alpha = Vec::with_capacity(m);
    let mut curv = Vec::with_capacity(m);
    for r in 0..m {
        let mut ar = ExteriorForm::zero(chart, 1);
        for mu in 0..n {
            let coeff = &Polynomial::var(Indeterminate::a(r, mu)) - &cs.background_potential(r, mu);
            ar += &ExteriorForm::monomial(chart, coeff, &[Indeterminate::x(mu)])?;
        }
        alpha.push(ar);
        let mut f = ExteriorForm::zero(chart, 2);
        for l in 0..n {
            for mu in (l + 1)..n {
                let jet = &Polynomial::var(Indeterminate::a_jet(r, mu, &[l]))
                    - &Polynomial::var(Indeterminate::a_jet(r, l, &[mu]));
                let mut coeff = &t * &jet;
                if sym {
                    let db = &Polynomial::var(Indeterminate::b(r, mu, &[l]))
                        - &Polynomial::var(Indeterminate::b(r, l, &[mu]));
                    coeff += &one_minus_t * &db;
                }
                for (rr, p, q, c) in cs.algebra().nonzero_constants() {
                    if rr == r {
                        coeff += (&interp(p, l) * &interp(q, mu)).scale(&c);
                    }
                }
                f += &ExteriorForm::monomial(chart, coeff, &[Indeterminate::x(l), Indeterminate::x(mu)])?;
            }
        }
        curv.push(f);
    }
    let k = Rational::from_int(cs.k() as i64);
    let s = invariant_product(cs.invariant(), chart, Some(&alpha), &curv)
        .map_coefficients(|p| Ok(p.integrate_t().scale(&k)))?;
    Lagrangian::from_form(&s)
}

/// Sizes and residuals of the transgression identity
/// `P₂ₖ(𝔉) − P₂ₖ(F_B) = d𝔖₂ₖ₋₁(B)` together with its sub-checks.
#[derive(Clone, Debug)]
pub struct TransgressionReport {
    /// Ad-invariance of `b`, closedness of `P₂ₖ(𝔉)`, gauge invariance of
    /// `P₂ₖ(𝔉)` along `ξ_C` and the transgression identity itself.
    pub checks: Vec<VerificationReport>,
    pub characteristic_terms: usize,
    pub background_terms: usize,
    pub cs_terms: usize,
}

impl TransgressionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(VerificationReport::passed)
    }
}

/// Runs every check of [`TransgressionReport`]. The gauge-invariance check
/// uses the generator with symbolic parameters `ξ^r(x)`.
pub fn transgression_check(cs: &CsData) -> Result<TransgressionReport> {
    let invariance = check_invariant_tensor(cs.algebra(), cs.invariant());
    let p = characteristic_form(cs);
    let pb = characteristic_at_b(cs)?;
    let s = cs_form(cs);
    let closed = VerificationReport::from_form("dP(F) = 0", &p.exterior_d()?);
    let generator = gauge_generator(cs.algebra(), cs.ctx())?;
    let gauge = VerificationReport::from_form("L_xi P(F) = 0", &p.lie_derivative(generator.field())?);
    let residual = &(&s.exterior_d()? - &p) + &pb;
    let identity = VerificationReport::from_form("P(F) - P(F_B) = dS(B)", &residual)
        .with_count("P(F)", p.len())
        .with_count("P(F_B)", pb.len())
        .with_count("S(B)", s.len());
    Ok(TransgressionReport {
        checks: vec![invariance, closed, gauge, identity],
        characteristic_terms: p.len(),
        background_terms: pb.len(),
        cs_terms: s.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2(bg: Background) -> CsData {
        let alg = LieAlgebra::su2();
        let b = InvariantTensor::killing(&alg);
        CsData::new(alg, b, bg, 1).unwrap()
    }

    fn u1(k: usize, bg: Background) -> CsData {
        CsData::new(LieAlgebra::u1(), InvariantTensor::power_sum(1, k), bg, 1).unwrap()
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(&[0, 0, 1]), Rational::from_int(3));
        assert_eq!(multiplicity(&[0, 1, 2]), Rational::from_int(6));
        assert_eq!(multiplicity(&[2, 2]), Rational::one());
    }

    #[test]
    fn rejects_bad_tensors() {
        let alg = LieAlgebra::su2();
        let bad = InvariantTensor::from_entries("e00", 3, 2, &[(vec![0, 0], Rational::one())]).unwrap();
        assert!(matches!(CsData::new(alg.clone(), bad, Background::Zero, 1), Err(Error::NotAdInvariant(_))));
        let linear = InvariantTensor::power_sum(1, 1);
        assert!(matches!(CsData::new(LieAlgebra::u1(), linear, Background::Zero, 1), Err(Error::InvalidTensor(_))));
        let wrong_dim = InvariantTensor::power_sum(2, 2);
        assert!(matches!(CsData::new_unchecked(alg, wrong_dim, Background::Zero, 1), Err(Error::InvalidTensor(_))));
    }

    #[test]
    fn abelian_curvature_has_no_quadratic_part() {
        let cs = u1(2, Background::Zero);
        let f = &canonical_curvature(&cs)[0];
        assert_eq!(f.len(), 3);
        assert!(f.terms().all(|(b, _)| b.iter().any(|c| c.is_field_jet())));
    }

    #[test]
    fn su2_curvature_quadratic_part() {
        let cs = su2(Background::Zero);
        let f0 = &canonical_curvature(&cs)[0];
        // ½ε_{0pq}a^p_λa^q_μ dx^λ∧dx^μ on dx0∧dx1: a^1_0a^2_1 − a^2_0a^1_1
        let a = |r, mu| Polynomial::var(Indeterminate::a(r, mu));
        let expected = &(&a(1, 0) * &a(2, 1)) - &(&a(2, 0) * &a(1, 1));
        assert_eq!(f0.coefficient(&[Indeterminate::x(0), Indeterminate::x(1)]), expected);
    }

    #[test]
    fn horizontal_projection_of_curvature() {
        for cs in [su2(Background::Zero), u1(2, Background::Zero)] {
            let curv = canonical_curvature(&cs);
            let strength = strength_horizontal(&cs).unwrap();
            for (f, s) in curv.iter().zip(&strength) {
                assert_eq!(&horizontal_projection(f, cs.ctx()).unwrap(), s);
            }
        }
    }

    #[test]
    fn characteristic_form_closed() {
        let cs = su2(Background::Zero);
        let p = characteristic_form(&cs);
        assert_eq!(p.degree(), 4);
        assert!(p.exterior_d().unwrap().is_zero());
    }

    #[test]
    fn abelian_characteristic_form() {
        let cs = u1(2, Background::Zero);
        let f = &canonical_curvature(&cs)[0];
        assert_eq!(characteristic_form(&cs), f.wedge(f));
    }

    #[test]
    fn characteristic_at_zero_background_vanishes() {
        assert!(characteristic_at_b(&su2(Background::Zero)).unwrap().is_zero());
        let cs = su2(Background::Symbolic);
        let pb = characteristic_at_b(&cs).unwrap();
        assert!(pb.is_horizontal());
        assert!(pb.exterior_d().unwrap().is_zero());
    }

    #[test]
    fn abelian_cs_form_at_zero_background() {
        let cs = u1(2, Background::Zero);
        let chart = cs.bundle_chart();
        let mut a = ExteriorForm::zero(chart, 1);
        let mut f = ExteriorForm::zero(chart, 2);
        for mu in 0..3 {
            a += &ExteriorForm::monomial(chart, Polynomial::var(Indeterminate::a(0, mu)), &[Indeterminate::x(mu)])
                .unwrap();
            f += &ExteriorForm::monomial(chart, Polynomial::one(), &[Indeterminate::a(0, mu), Indeterminate::x(mu)])
                .unwrap();
        }
        assert_eq!(cs_form(&cs), a.wedge(&f));
    }

    #[test]
    fn transgression_su2() {
        let cs = su2(Background::Symbolic);
        let lhs = &characteristic_form(&cs) - &characteristic_at_b(&cs).unwrap();
        assert_eq!(cs_form(&cs).exterior_d().unwrap(), lhs);
    }

    #[test]
    fn explicit_lagrangian_matches_projection() {
        for bg in [Background::Zero, Background::Symbolic] {
            let cs = su2(bg);
            assert_eq!(cs_lagrangian(&cs).unwrap(), cs_lagrangian_explicit(&cs).unwrap());
        }
    }
}
