use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::{Indeterminate, Kind, Rational};
use crate::error::{Error, Result};

static MAX_TERMS: AtomicUsize = AtomicUsize::new(10_000_000);

/// Caps the number of monomials any single product may produce.
///
/// Exceeding the cap unwinds with a [`TermLimitExceeded`] panic payload.
pub fn set_max_terms(limit: usize) {
    MAX_TERMS.store(limit, AtomicOrdering::Relaxed);
}

pub fn max_terms() -> usize {
    MAX_TERMS.load(AtomicOrdering::Relaxed)
}

/// Panic payload raised when an expansion exceeds [`max_terms`].
#[derive(Debug, Clone, Copy)]
pub struct TermLimitExceeded {
    pub terms: usize,
    pub limit: usize,
}

fn check_limit(len: usize) {
    let limit = max_terms();
    if len > limit {
        std::panic::panic_any(TermLimitExceeded { terms: len, limit });
    }
}

/// Product of indeterminate powers, ordered graded-lexicographically:
/// total degree first, then the sorted `(variable, exponent)` sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    degree: u32,
    vars: SmallVec<[(Indeterminate, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Indeterminate) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: Indeterminate, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        let mut vars = SmallVec::new();
        vars.push((v, e));
        Monomial { degree: e, vars }
    }

    pub fn from_factors(factors: &[(Indeterminate, u32)]) -> Self {
        factors
            .iter()
            .fold(Monomial::one(), |m, &(v, e)| m.mul(&Monomial::power(v, e)))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn factors(&self) -> &[(Indeterminate, u32)] {
        &self.vars
    }

    pub fn exponent(&self, v: Indeterminate) -> u32 {
        self.vars
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.vars[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.vars.is_empty() {
            return self.clone();
        }
        if self.vars.is_empty() {
            return other.clone();
        }
        let mut vars = SmallVec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            let (a, ea) = self.vars[i];
            let (b, eb) = other.vars[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    vars.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    vars.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    vars.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[j..]);
        Monomial { degree: self.degree + other.degree, vars }
    }

    /// Removes one power of the factor at position `i`.
    fn lower_at(&self, i: usize) -> Monomial {
        let mut out = self.clone();
        out.degree -= 1;
        if out.vars[i].1 == 1 {
            out.vars.remove(i);
        } else {
            out.vars[i].1 -= 1;
        }
        out
    }

    /// Removes the variable entirely, returning its exponent.
    fn without(&self, v: Indeterminate) -> (Monomial, u32) {
        match self.vars.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => {
                let mut out = self.clone();
                let (_, e) = out.vars.remove(i);
                out.degree -= e;
                (out, e)
            }
            Err(_) => (self.clone(), 0),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (v, e)) in self.vars.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in canonical monomial order and zero coefficients are never
/// stored, so two polynomials are equal iff they are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

type Accumulator = FxHashMap<Monomial, Rational>;

fn accumulate(acc: &mut Accumulator, m: Monomial, c: Rational) {
    match acc.entry(m) {
        std::collections::hash_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
        }
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    pub fn var(v: Indeterminate) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc = Accumulator::default();
        for (m, c) in terms {
            accumulate(&mut acc, m, c);
        }
        Self::from_accumulator(acc)
    }

    fn from_accumulator(acc: Accumulator) -> Self {
        check_limit(acc.len());
        Polynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    /// Constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Indeterminate> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| *v))
            .collect()
    }

    pub fn mentions(&self, v: Indeterminate) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with every other indeterminate held constant.
    pub fn partial(&self, v: Indeterminate) -> Polynomial {
        let mut acc = Accumulator::default();
        for (m, c) in &self.terms {
            if let Ok(i) = m.vars.binary_search_by(|(w, _)| w.cmp(&v)) {
                let e = m.vars[i].1;
                accumulate(&mut acc, m.lower_at(i), c * &Rational::from_int(e as i64));
            }
        }
        Self::from_accumulator(acc)
    }

    /// All nonzero first partials in one pass.
    pub fn gradient(&self) -> BTreeMap<Indeterminate, Polynomial> {
        let mut buckets: BTreeMap<Indeterminate, Accumulator> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (i, (v, e)) in m.vars.iter().enumerate() {
                accumulate(
                    buckets.entry(*v).or_default(),
                    m.lower_at(i),
                    c * &Rational::from_int(*e as i64),
                );
            }
        }
        buckets
            .into_iter()
            .map(|(v, acc)| (v, Self::from_accumulator(acc)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    /// Applies the derivation `D` determined by its values on indeterminates:
    /// `D(f) = Σ_v ∂f/∂v · D(v)`. `image` returns `None` where `D(v) = 0`.
    pub fn derivation<F>(&self, mut image: F) -> Result<Polynomial>
    where
        F: FnMut(Indeterminate) -> Result<Option<Polynomial>>,
    {
        let mut cache: FxHashMap<Indeterminate, Option<Polynomial>> = FxHashMap::default();
        let mut acc = Accumulator::default();
        for (m, c) in &self.terms {
            for (i, (v, e)) in m.vars.iter().enumerate() {
                let img = match cache.get(v) {
                    Some(img) => img,
                    None => {
                        let img = image(*v)?.filter(|p| !p.is_zero());
                        cache.entry(*v).or_insert(img)
                    }
                };
                let Some(img) = img else { continue };
                let rest = m.lower_at(i);
                let coeff = c * &Rational::from_int(*e as i64);
                for (n, d) in &img.terms {
                    accumulate(&mut acc, rest.mul(n), &coeff * d);
                }
            }
        }
        Ok(Self::from_accumulator(acc))
    }

    /// Simultaneous substitution of the bound indeterminates.
    ///
    /// A value may mention its own key (`a ↦ t·a`), but not another bound
    /// indeterminate.
    pub fn substitute(&self, bindings: &BTreeMap<Indeterminate, Polynomial>) -> Result<Polynomial> {
        for (k, val) in bindings {
            for w in val.variables() {
                if w != *k && bindings.contains_key(&w) {
                    return Err(Error::CyclicSubstitution {
                        bound: k.to_string(),
                        mentioned: w.to_string(),
                    });
                }
            }
        }
        Ok(self.substitute_unchecked(bindings))
    }

    pub(crate) fn substitute_unchecked(
        &self,
        bindings: &BTreeMap<Indeterminate, Polynomial>,
    ) -> Polynomial {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut powers: FxHashMap<(Indeterminate, u32), Polynomial> = FxHashMap::default();
        let mut acc = Accumulator::default();
        for (m, c) in &self.terms {
            let mut kept = Monomial::one();
            let mut product = Polynomial::constant(c.clone());
            for &(v, e) in m.factors() {
                match bindings.get(&v) {
                    Some(val) => {
                        let p = powers.entry((v, e)).or_insert_with(|| val.pow(e));
                        product = &product * &*p;
                        if product.is_zero() {
                            break;
                        }
                    }
                    None => kept = kept.mul(&Monomial::power(v, e)),
                }
            }
            for (n, d) in product.terms {
                accumulate(&mut acc, n.mul(&kept), d);
            }
        }
        Self::from_accumulator(acc)
    }

    /// Exact `∫₀¹ p dt` in the homotopy parameter `t`.
    pub fn integrate_t(&self) -> Polynomial {
        let t = Indeterminate::t();
        let mut acc = Accumulator::default();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(t);
            accumulate(&mut acc, rest, c * &Rational::new(1, e as i64 + 1));
        }
        Self::from_accumulator(acc)
    }

    /// Evaluates at a point given by `value`.
    pub fn eval<F: Fn(Indeterminate) -> Rational>(&self, value: F) -> Rational {
        let mut cache: FxHashMap<Indeterminate, Rational> = FxHashMap::default();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.factors() {
                let x = cache.entry(v).or_insert_with(|| value(v));
                term *= &x.pow(e);
            }
            total += &term;
        }
        total
    }

    /// Highest derivative order among field jets (`None` when there are none).
    pub fn max_jet_order(&self) -> Option<usize> {
        self.variables().iter().filter(|v| v.is_field_jet()).map(|v| v.order()).max()
    }

    pub fn max_order_of(&self, kind: Kind) -> Option<usize> {
        self.variables().iter().filter(|v| v.kind() == kind).map(|v| v.order()).max()
    }

    fn add_into(&mut self, other: &Polynomial, negate: bool) {
        for (m, c) in &other.terms {
            let c = if negate { -c } else { c.clone() };
            match self.terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += &c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
            }
        }
    }

    fn mul_ref(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc = Accumulator::default();
        acc.reserve(self.len().max(other.len()));
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                accumulate(&mut acc, m.mul(n), c * d);
            }
        }
        Self::from_accumulator(acc)
    }
}

impl From<Indeterminate> for Polynomial {
    fn from(v: Indeterminate) -> Self {
        Polynomial::var(v)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        self.add_into(rhs, false);
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        self.add_into(rhs, true);
    }
}

impl AddAssign<Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        if self.len() < rhs.len() {
            let lhs = std::mem::replace(self, rhs);
            self.add_into(&lhs, false);
        } else {
            self.add_into(&rhs, false);
        }
    }
}

impl SubAssign<Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: Polynomial) {
        self.add_into(&rhs, true);
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut big, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        big.add_into(small, false);
        big
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_into(rhs, true);
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_ref(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        let mut acc = Polynomial::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

/// Canonical text: terms in ascending monomial order joined by ` + `,
/// each written `num/den` or `num/den*v1*v2^e`; the zero polynomial is `0`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    type I = Indeterminate;

    fn p(v: I) -> Polynomial {
        Polynomial::var(v)
    }

    fn q(n: i64, d: i64) -> Polynomial {
        Polynomial::constant(Rational::new(n, d))
    }

    #[test]
    fn add_examples() {
        let x0 = p(I::x(0));
        let a = p(I::a(0, 0));
        assert_eq!(&(&x0 + &(&a * &q(2, 1))) + &(-&x0), &a * &q(2, 1));
        assert_eq!(&a + &Polynomial::zero(), a);
        let xi = p(I::xi(0, &[]));
        assert_eq!(&(&xi * &q(1, 2)) + &(&xi * &q(1, 2)), xi);
    }

    #[test]
    fn mul_examples() {
        let a00 = p(I::a(0, 0));
        let a11 = p(I::a(1, 1));
        let prod = &a00 * &a11;
        assert_eq!(prod.len(), 1);
        assert_eq!(prod.to_string(), "1/1*a[r=0;mu=0;D=()]*a[r=1;mu=1;D=()]");
        assert_eq!(&a00 * &Polynomial::one(), a00);
        let x = p(I::x(0));
        let one = Polynomial::one();
        assert_eq!(&(&x + &one) * &(&x - &one), &(&x * &x) - &one);
    }

    #[test]
    fn partial_examples() {
        let a = p(I::a(0, 0));
        assert_eq!((&a * &a).partial(I::a(0, 0)), &a * &q(2, 1));
        assert!(p(I::x(1)).partial(I::x(0)).is_zero());
        let a10 = p(I::a(1, 0));
        assert_eq!((&a * &a10).partial(I::a(1, 0)), a);
    }

    #[test]
    fn substitute_examples() {
        let a = I::a(0, 0);
        let t = p(I::t());
        let scaled = p(a).substitute(&BTreeMap::from([(a, &t * &p(a))])).unwrap();
        assert_eq!(scaled, &t * &p(a));

        let b = p(I::b(0, 0, &[]));
        let diff = &p(a) - &b;
        assert!(diff.substitute(&BTreeMap::from([(a, b.clone())])).unwrap().is_zero());

        let x = p(I::x(0));
        let one = Polynomial::one();
        let sq = (&p(a) * &p(a)).substitute(&BTreeMap::from([(a, &x + &one)])).unwrap();
        assert_eq!(sq, &(&(&x * &x) + &(&x * &q(2, 1))) + &one);
    }

    #[test]
    fn substitute_rejects_cross_reference() {
        let a = I::a(0, 0);
        let c = I::a(1, 0);
        let err = p(a)
            .substitute(&BTreeMap::from([(a, p(c)), (c, p(I::x(0)))]))
            .unwrap_err();
        assert!(matches!(err, Error::CyclicSubstitution { .. }));
    }

    #[test]
    fn integrate_t_examples() {
        let t = p(I::t());
        assert_eq!((&t * &t).integrate_t(), q(1, 3));
        assert_eq!(Polynomial::one().integrate_t(), Polynomial::one());
        let a = p(I::a(0, 0));
        let b = p(I::b(0, 0, &[]));
        let lin = &(&t * &a) + &(&(&Polynomial::one() - &t) * &b);
        assert_eq!(lin.integrate_t(), &(&a * &q(1, 2)) + &(&b * &q(1, 2)));
    }

    #[test]
    fn display_is_canonical() {
        let x = p(I::x(0));
        let a = p(I::a(0, 1));
        let poly = &(&(&x * &x) * &q(-1, 2)) + &(&a + &q(3, 1));
        assert_eq!(poly.to_string(), "3/1 + 1/1*a[r=0;mu=1;D=()] + -1/2*x[0]^2");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    #[test]
    fn derivation_matches_gradient() {
        let x = p(I::x(0));
        let a = p(I::a(0, 0));
        let f = &(&x * &a) * &a;
        let g = f.gradient();
        assert_eq!(g[&I::x(0)], &a * &a);
        assert_eq!(g[&I::a(0, 0)], &(&x * &a) * &q(2, 1));
        let d = f.derivation(|v| Ok((v == I::a(0, 0)).then(Polynomial::one))).unwrap();
        assert_eq!(d, g[&I::a(0, 0)]);
    }
}
