//! Exterior algebra of differential forms with polynomial coefficients.
//!
//! A form is a finite sum `Σ f_I dc_{i1}∧…∧dc_{ip}` where the `c` are chart
//! coordinates and the tuples are strictly increasing in the indeterminate
//! order. Function symbols (`B`, `ξ` and their derivatives) are functions of
//! the base coordinates only; they have no differentials of their own and
//! `d` turns their variation into `dx^λ` terms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::symbolic::{Indeterminate, Kind, Polynomial, Rational};

/// Coordinate chart: base coordinates, connection jets `a^r_{Λ;μ}` and matter
/// jets `z^A_Λ` with `|Λ| ≤ jet_order`, and optionally the homotopy
/// parameter `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    base_dim: usize,
    gauge_dim: usize,
    matter_dim: usize,
    jet_order: usize,
    aux_t: bool,
}

/// What `d` does to an indeterminate appearing in a coefficient.
enum DiffRule {
    Coordinate,
    Function,
    Parameter,
}

impl Chart {
    pub fn new(base_dim: usize, gauge_dim: usize, matter_dim: usize, jet_order: usize) -> Self {
        Chart { base_dim, gauge_dim, matter_dim, jet_order, aux_t: false }
    }

    /// Same chart with `t` adjoined as a coordinate.
    pub fn with_aux_t(self) -> Self {
        Chart { aux_t: true, ..self }
    }

    pub fn without_aux_t(self) -> Self {
        Chart { aux_t: false, ..self }
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn gauge_dim(&self) -> usize {
        self.gauge_dim
    }

    pub fn matter_dim(&self) -> usize {
        self.matter_dim
    }

    pub fn jet_order(&self) -> usize {
        self.jet_order
    }

    pub fn has_aux_t(&self) -> bool {
        self.aux_t
    }

    fn indices_ok(&self, v: &Indeterminate) -> bool {
        v.deriv().as_slice().iter().all(|&l| (l as usize) < self.base_dim)
    }

    pub fn contains(&self, v: Indeterminate) -> bool {
        match v.kind() {
            Kind::BaseCoord => v.fiber() < self.base_dim,
            Kind::ConnJet => {
                v.fiber() < self.gauge_dim
                    && v.comp() < self.base_dim
                    && v.order() <= self.jet_order
                    && self.indices_ok(&v)
            }
            Kind::MatterJet => {
                v.fiber() < self.matter_dim && v.order() <= self.jet_order && self.indices_ok(&v)
            }
            Kind::AuxScalar => self.aux_t,
            Kind::BackgroundFn | Kind::GaugeParam => false,
        }
    }

    /// All coordinates in canonical order.
    pub fn coordinates(&self) -> Vec<Indeterminate> {
        let mut out: Vec<Indeterminate> = (0..self.base_dim).map(Indeterminate::x).collect();
        for order in 0..=self.jet_order {
            for deriv in multi_indices(self.base_dim, order) {
                for r in 0..self.gauge_dim {
                    for mu in 0..self.base_dim {
                        out.push(Indeterminate::a_jet(r, mu, &deriv));
                    }
                }
                for a in 0..self.matter_dim {
                    out.push(Indeterminate::z(a, &deriv));
                }
            }
        }
        if self.aux_t {
            out.push(Indeterminate::t());
        }
        out.sort();
        out
    }

    fn diff_rule(&self, v: Indeterminate) -> Result<DiffRule> {
        if self.contains(v) {
            return Ok(DiffRule::Coordinate);
        }
        match v.kind() {
            Kind::BackgroundFn | Kind::GaugeParam => Ok(DiffRule::Function),
            Kind::AuxScalar => Ok(DiffRule::Parameter),
            Kind::ConnJet | Kind::MatterJet if v.order() > self.jet_order => {
                Err(Error::JetOrderExceeded { symbol: v.to_string(), max: self.jet_order })
            }
            _ => Err(Error::NotInChart(v.to_string())),
        }
    }

    /// `∂_λ` of a function symbol, as the symbol with `λ` appended.
    pub fn derive_symbol(&self, v: Indeterminate, lambda: usize) -> Result<Indeterminate> {
        v.derive(lambda).ok_or_else(|| Error::JetOrderExceeded {
            symbol: v.to_string(),
            max: crate::symbolic::MAX_DERIV,
        })
    }
}

/// Sorted multi-indices of the given length over `0..n`.
pub fn multi_indices(n: usize, order: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, order: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == order {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, order, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, order, 0, &mut Vec::new(), &mut out);
    out
}

/// Strictly increasing tuple of coordinate differentials.
pub type Basis = SmallVec<[Indeterminate; 6]>;

/// Merges two sorted bases, returning `None` when they share a coordinate and
/// otherwise the merged basis with the sign of the shuffle.
fn merge_bases(a: &Basis, b: &Basis) -> Option<(Basis, bool)> {
    let mut out = Basis::with_capacity(a.len() + b.len());
    let mut negative = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                // b[j] jumps over the remaining a.len() - i elements
                if (a.len() - i) % 2 == 1 {
                    negative = !negative;
                }
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, negative))
}

/// Sorts a list of differentials, returning the sign of the permutation, or
/// `None` on a repeated coordinate.
pub fn sort_basis(items: &[Indeterminate]) -> Option<(Basis, bool)> {
    let mut v: Basis = items.iter().copied().collect();
    let mut negative = false;
    // insertion sort; bases are short
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, negative))
}

/// A vector field given by its components on chart coordinates.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    components: BTreeMap<Indeterminate, Polynomial>,
}

impl VectorField {
    pub fn new() -> Self {
        VectorField::default()
    }

    /// Coordinate vector field `∂/∂v`.
    pub fn coordinate(v: Indeterminate) -> Self {
        let mut f = VectorField::new();
        f.set(v, Polynomial::one());
        f
    }

    pub fn from_components(components: impl IntoIterator<Item = (Indeterminate, Polynomial)>) -> Self {
        let mut f = VectorField::new();
        for (v, p) in components {
            f.add_component(v, &p);
        }
        f
    }

    pub fn set(&mut self, v: Indeterminate, p: Polynomial) {
        if p.is_zero() {
            self.components.remove(&v);
        } else {
            self.components.insert(v, p);
        }
    }

    pub fn add_component(&mut self, v: Indeterminate, p: &Polynomial) {
        let sum = self.component(v) + p;
        self.set(v, sum);
    }

    pub fn component(&self, v: Indeterminate) -> Polynomial {
        self.components.get(&v).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Indeterminate, &Polynomial)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// No components along base coordinates.
    pub fn is_vertical(&self) -> bool {
        self.components.keys().all(|v| v.kind() != Kind::BaseCoord)
    }

    /// Action on a function: `X(f) = Σ_c X^c ∂f/∂c`, with function symbols
    /// differentiated through the base components `X^{x^λ}`.
    pub fn apply(&self, chart: &Chart, f: &Polynomial) -> Result<Polynomial> {
        let base: Vec<(usize, Polynomial)> = (0..chart.base_dim())
            .filter_map(|l| self.components.get(&Indeterminate::x(l)).map(|p| (l, p.clone())))
            .collect();
        f.derivation(|v| {
            if v.is_function_symbol() {
                if base.is_empty() {
                    return Ok(None);
                }
                let mut img = Polynomial::zero();
                for (l, xl) in &base {
                    img += xl * &Polynomial::var(chart.derive_symbol(v, *l)?);
                }
                Ok(Some(img))
            } else {
                Ok(self.components.get(&v).cloned())
            }
        })
    }

    /// Commutator `[X, Y]^c = X(Y^c) − Y(X^c)`.
    pub fn bracket(&self, other: &VectorField, chart: &Chart) -> Result<VectorField> {
        let mut out = VectorField::new();
        let keys: std::collections::BTreeSet<Indeterminate> =
            self.components.keys().chain(other.components.keys()).copied().collect();
        for c in keys {
            let val = self.apply(chart, &other.component(c))? - other.apply(chart, &self.component(c))?;
            out.set(c, val);
        }
        Ok(out)
    }

    pub fn scale(&self, p: &Polynomial) -> VectorField {
        VectorField::from_components(self.components.iter().map(|(v, c)| (*v, c * p)))
    }

    /// Applies `f` to every component.
    pub fn map_components<F>(&self, mut f: F) -> Result<VectorField>
    where
        F: FnMut(&Polynomial) -> Result<Polynomial>,
    {
        let mut out = VectorField::new();
        for (v, c) in &self.components {
            out.set(*v, f(c)?);
        }
        Ok(out)
    }
}

impl Add<&VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (v, p) in &rhs.components {
            out.add_component(*v, p);
        }
        out
    }
}

impl Sub<&VectorField> for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (v, p) in &rhs.components {
            out.add_component(*v, &-p);
        }
        out
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        for (k, (v, p)) in self.components.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "d/d{v} : {p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Homogeneous differential form on a [`Chart`].
#[derive(Clone, PartialEq, Eq)]
pub struct ExteriorForm {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<Basis, Polynomial>,
}

impl ExteriorForm {
    pub fn zero(chart: Chart, degree: usize) -> Self {
        ExteriorForm { chart, degree, terms: BTreeMap::new() }
    }

    /// 0-form.
    pub fn scalar(chart: Chart, f: Polynomial) -> Self {
        let mut out = Self::zero(chart, 0);
        out.add_term(Basis::new(), f);
        out
    }

    /// `dv` for a chart coordinate `v`.
    pub fn differential(chart: Chart, v: Indeterminate) -> Result<Self> {
        Self::monomial(chart, Polynomial::one(), &[v])
    }

    /// `f · dc_1∧…∧dc_p` for chart coordinates in any order.
    pub fn monomial(chart: Chart, f: Polynomial, coords: &[Indeterminate]) -> Result<Self> {
        for &c in coords {
            if !chart.contains(c) {
                return Err(chart.diff_rule(c).err().unwrap_or_else(|| Error::NotInChart(c.to_string())));
            }
        }
        let mut out = Self::zero(chart, coords.len());
        if let Some((basis, negative)) = sort_basis(coords) {
            out.add_term(basis, if negative { -f } else { f });
        }
        Ok(out)
    }

    /// `dx^0∧…∧dx^{n−1}`.
    pub fn volume(chart: Chart) -> Self {
        let coords: Vec<Indeterminate> = (0..chart.base_dim()).map(Indeterminate::x).collect();
        Self::monomial(chart, Polynomial::one(), &coords).expect("base coordinates are in every chart")
    }

    /// `ω_λ = ∂_λ ⌋ (dx^0∧…∧dx^{n−1})`.
    pub fn volume_contracted(chart: Chart, lambda: usize) -> Self {
        Self::volume(chart).contract(&VectorField::coordinate(Indeterminate::x(lambda)))
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of basis terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total number of monomials across all coefficients.
    pub fn monomial_count(&self) -> usize {
        self.terms.values().map(Polynomial::len).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &Polynomial)> {
        self.terms.iter()
    }

    /// Coefficient of a basis given in any order (sign-adjusted).
    pub fn coefficient(&self, coords: &[Indeterminate]) -> Polynomial {
        match sort_basis(coords) {
            Some((basis, negative)) => {
                let c = self.terms.get(&basis).cloned().unwrap_or_default();
                if negative {
                    -c
                } else {
                    c
                }
            }
            None => Polynomial::zero(),
        }
    }

    /// Coefficient of `dx^0∧…∧dx^{n−1}`.
    pub fn top_coefficient(&self) -> Polynomial {
        let coords: Vec<Indeterminate> = (0..self.chart.base_dim()).map(Indeterminate::x).collect();
        self.coefficient(&coords)
    }

    /// Only base differentials appear.
    pub fn is_horizontal(&self) -> bool {
        self.terms.keys().all(|b| b.iter().all(|c| c.kind() == Kind::BaseCoord))
    }

    fn add_term(&mut self, basis: Basis, f: Polynomial) {
        debug_assert_eq!(basis.len(), self.degree);
        if f.is_zero() {
            return;
        }
        match self.terms.entry(basis) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += f;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f);
            }
        }
    }

    fn add_signed(&mut self, basis: Basis, f: Polynomial, negative: bool) {
        self.add_term(basis, if negative { -f } else { f });
    }

    fn check_compatible(&self, other: &ExteriorForm) {
        assert_eq!(self.chart, other.chart, "forms live on different charts");
    }

    /// Same form viewed on another chart containing all of its coordinates.
    pub fn on_chart(&self, chart: Chart) -> Result<ExteriorForm> {
        for b in self.terms.keys() {
            for &c in b {
                if !chart.contains(c) {
                    return Err(Error::NotInChart(c.to_string()));
                }
            }
        }
        Ok(ExteriorForm { chart, ..self.clone() })
    }

    /// Multiplies every coefficient by a function.
    pub fn mul_function(&self, f: &Polynomial) -> ExteriorForm {
        let mut out = Self::zero(self.chart, self.degree);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c * f);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> ExteriorForm {
        let mut out = Self::zero(self.chart, self.degree);
        for (b, p) in &self.terms {
            out.add_term(b.clone(), p.scale(c));
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients<F>(&self, mut f: F) -> Result<ExteriorForm>
    where
        F: FnMut(&Polynomial) -> Result<Polynomial>,
    {
        let mut out = Self::zero(self.chart, self.degree);
        for (b, p) in &self.terms {
            out.add_term(b.clone(), f(p)?);
        }
        Ok(out)
    }

    /// `α ∧ β`.
    pub fn wedge(&self, other: &ExteriorForm) -> ExteriorForm {
        self.check_compatible(other);
        let mut out = Self::zero(self.chart, self.degree + other.degree);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                if let Some((basis, negative)) = merge_bases(a, b) {
                    out.add_signed(basis, f * g, negative);
                }
            }
        }
        out
    }

    /// Exterior derivative. Function symbols contribute `∂_λ s dx^λ`; the
    /// parameter `t` is a constant unless it is a chart coordinate.
    pub fn exterior_d(&self) -> Result<ExteriorForm> {
        let chart = self.chart;
        let mut out = Self::zero(chart, self.degree + 1);
        for (basis, f) in &self.terms {
            for (v, df) in f.gradient() {
                match chart.diff_rule(v)? {
                    DiffRule::Coordinate => {
                        let single: Basis = std::iter::once(v).collect();
                        if let Some((b, negative)) = merge_bases(&single, basis) {
                            out.add_signed(b, df, negative);
                        }
                    }
                    DiffRule::Function => {
                        for l in 0..chart.base_dim() {
                            let dv = Polynomial::var(chart.derive_symbol(v, l)?);
                            let single: Basis = std::iter::once(Indeterminate::x(l)).collect();
                            if let Some((b, negative)) = merge_bases(&single, basis) {
                                out.add_signed(b, &df * &dv, negative);
                            }
                        }
                    }
                    DiffRule::Parameter => {}
                }
            }
        }
        Ok(out)
    }

    /// Interior product `X ⌋ α`; zero on 0-forms.
    pub fn contract(&self, field: &VectorField) -> ExteriorForm {
        if self.degree == 0 {
            return Self::zero(self.chart, 0);
        }
        let mut out = Self::zero(self.chart, self.degree - 1);
        for (basis, f) in &self.terms {
            for (j, c) in basis.iter().enumerate() {
                let Some(xc) = field.components.get(c) else { continue };
                let mut rest = basis.clone();
                rest.remove(j);
                out.add_signed(rest, f * xc, j % 2 == 1);
            }
        }
        out
    }

    /// Lie derivative via `X⌋dα + d(X⌋α)`.
    pub fn lie_derivative(&self, field: &VectorField) -> Result<ExteriorForm> {
        let a = self.exterior_d()?.contract(field);
        if self.degree == 0 {
            return Ok(a);
        }
        let b = self.contract(field).exterior_d()?;
        Ok(&a + &b)
    }

    /// Pull-back along a coordinate map.
    ///
    /// `values` substitutes coefficients; `image` gives the 1-form on
    /// `target` that replaces `dc` (or `None` to keep `dc`, which must then be
    /// a coordinate of `target`).
    pub fn pull_back<F>(
        &self,
        target: Chart,
        values: &BTreeMap<Indeterminate, Polynomial>,
        mut image: F,
    ) -> Result<ExteriorForm>
    where
        F: FnMut(Indeterminate) -> Result<Option<ExteriorForm>>,
    {
        let mut cache: FxHashMap<Indeterminate, ExteriorForm> = FxHashMap::default();
        let mut out = Self::zero(target, self.degree);
        for (basis, f) in &self.terms {
            let coeff = f.substitute(values)?;
            if coeff.is_zero() {
                continue;
            }
            let mut acc = ExteriorForm::scalar(target, coeff);
            for &c in basis {
                if !cache.contains_key(&c) {
                    let img = match image(c)? {
                        Some(img) => {
                            if img.degree != 1 || img.chart != target {
                                return Err(Error::DegreeMismatch { expected: 1, found: img.degree });
                            }
                            img
                        }
                        None => ExteriorForm::differential(target, c)?,
                    };
                    cache.insert(c, img);
                }
                acc = acc.wedge(&cache[&c]);
                if acc.is_zero() {
                    break;
                }
            }
            for (b, p) in acc.terms {
                out.add_term(b, p);
            }
        }
        Ok(out)
    }

    /// Human-readable single-line summary used in reports.
    pub fn summary(&self) -> String {
        format!("{}-form, {} basis terms, {} monomials", self.degree, self.len(), self.monomial_count())
    }
}

impl Add<&ExteriorForm> for &ExteriorForm {
    type Output = ExteriorForm;
    fn add(self, rhs: &ExteriorForm) -> ExteriorForm {
        self.check_compatible(rhs);
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (b, p) in &rhs.terms {
            out.add_term(b.clone(), p.clone());
        }
        out
    }
}

impl AddAssign<&ExteriorForm> for ExteriorForm {
    fn add_assign(&mut self, rhs: &ExteriorForm) {
        self.check_compatible(rhs);
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        for (b, p) in &rhs.terms {
            self.add_term(b.clone(), p.clone());
        }
    }
}

impl Sub<&ExteriorForm> for &ExteriorForm {
    type Output = ExteriorForm;
    fn sub(self, rhs: &ExteriorForm) -> ExteriorForm {
        self + &(-rhs)
    }
}

impl Neg for &ExteriorForm {
    type Output = ExteriorForm;
    fn neg(self) -> ExteriorForm {
        let mut out = ExteriorForm::zero(self.chart, self.degree);
        for (b, p) in &self.terms {
            out.add_term(b.clone(), -p);
        }
        out
    }
}

fn write_basis(f: &mut fmt::Formatter<'_>, basis: &Basis) -> fmt::Result {
    if basis.is_empty() {
        return f.write_str("1");
    }
    for (k, c) in basis.iter().enumerate() {
        if k > 0 {
            f.write_str("∧")?;
        }
        write!(f, "d{c}")?;
    }
    Ok(())
}

/// One `basis : coefficient` line per term in canonical order; `0` when empty.
impl fmt::Display for ExteriorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write_basis(f, b)?;
            write!(f, " : {p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExteriorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
