//! Test-only oracles. None of these call into the engine's differentiation,
//! wedge or contraction code; they evaluate at rational points and work from
//! raw index tables.

#![allow(dead_code)]

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use jetvar::{ExteriorForm, Indeterminate, Kind, Polynomial, Rational};

/// Deterministic pseudo-random rational value for every indeterminate.
#[derive(Clone, Copy, Debug)]
pub struct Point {
    seed: u64,
}

impl Point {
    pub fn new(seed: u64) -> Self {
        Point { seed }
    }

    pub fn value(&self, v: Indeterminate) -> Rational {
        let mut h = DefaultHasher::new();
        self.seed.hash(&mut h);
        v.to_string().hash(&mut h);
        let bits = h.finish();
        let num = (bits % 19) as i64 - 9;
        let den = ((bits >> 8) % 7) as i64 + 1;
        Rational::new(num, den)
    }
}

/// Plain evaluation by walking the monomials.
pub fn eval_with<F: Fn(Indeterminate) -> Rational>(p: &Polynomial, value: F) -> Rational {
    let mut total = Rational::zero();
    for (m, c) in p.terms() {
        let mut term = c.clone();
        for &(v, e) in m.factors() {
            let x = value(v);
            for _ in 0..e {
                term = &term * &x;
            }
        }
        total = &total + &term;
    }
    total
}

pub fn eval(p: &Polynomial, pt: Point) -> Rational {
    eval_with(p, |v| pt.value(v))
}

fn max_exponent(p: &Polynomial, v: Indeterminate) -> u32 {
    p.terms().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
}

/// `∂p/∂v` at `pt`, by exact Lagrange interpolation of `s ↦ p(pt + s e_v)`
/// at `s = 0, 1, …, deg` and differentiating the interpolant at zero.
pub fn partial_at(p: &Polynomial, v: Indeterminate, pt: Point) -> Rational {
    let d = max_exponent(p, v) as i64;
    if d == 0 {
        return Rational::zero();
    }
    let base = pt.value(v);
    let samples: Vec<Rational> = (0..=d)
        .map(|s| {
            let shifted = &base + &Rational::from_int(s);
            eval_with(p, |w| if w == v { shifted.clone() } else { pt.value(w) })
        })
        .collect();
    // L_j'(0) for nodes 0..=d
    let mut total = Rational::zero();
    for j in 0..=d {
        let mut denom = Rational::one();
        for m in 0..=d {
            if m != j {
                denom = &denom * &Rational::from_int(j - m);
            }
        }
        // derivative at 0 of Π_{m≠j}(s − m)
        let mut deriv = Rational::zero();
        for skip in 0..=d {
            if skip == j {
                continue;
            }
            let mut prod = Rational::one();
            for m in 0..=d {
                if m != j && m != skip {
                    prod = &prod * &Rational::from_int(-m);
                }
            }
            deriv = &deriv + &prod;
        }
        total = &total + &(&(&samples[j as usize] * &deriv) / &denom);
    }
    total
}

/// `d_λ p` at `pt` by the chain rule, with every partial taken by
/// interpolation and every raised symbol read off the point.
pub fn total_derivative_at(p: &Polynomial, lambda: usize, pt: Point) -> Rational {
    let mut total = Rational::zero();
    for v in p.variables() {
        let dv = match v.kind() {
            Kind::BaseCoord => {
                if v.fiber() == lambda {
                    Rational::one()
                } else {
                    continue;
                }
            }
            Kind::AuxScalar => continue,
            _ => pt.value(v.derive(lambda).expect("room to raise")),
        };
        total = &total + &(&partial_at(p, v, pt) * &dv);
    }
    total
}

/// `∂_i ℒ − Σ_λ d_λ(∂ℒ/∂y_λ)` at a point, with `d_λ` applied to the
/// symbolic momentum through [`total_derivative_at`]. The momentum itself is
/// obtained by interpolation in the jet variable, keeping all other
/// variables symbolic.
pub fn euler_lagrange_at(density: &Polynomial, field: Indeterminate, n: usize, pt: Point) -> Rational {
    let mut out = partial_at(density, field, pt);
    for lambda in 0..n {
        let jet = field.derive(lambda).unwrap();
        let momentum = symbolic_partial(density, jet);
        out = &out - &total_derivative_at(&momentum, lambda, pt);
    }
    out
}

/// `∂p/∂v` as a polynomial, from the exponents directly.
pub fn symbolic_partial(p: &Polynomial, v: Indeterminate) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let e = m.exponent(v);
        if e == 0 {
            continue;
        }
        let mut factors: Vec<(Indeterminate, u32)> = Vec::new();
        for &(w, k) in m.factors() {
            if w == v {
                if k > 1 {
                    factors.push((w, k - 1));
                }
            } else {
                factors.push((w, k));
            }
        }
        out += Polynomial::term(c * &Rational::from_int(e as i64), jetvar::symbolic::Monomial::from_factors(&factors));
    }
    out
}

/// Tangent vector as coordinate components.
pub type Tangent = BTreeMap<Indeterminate, Rational>;

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -&det;
        }
        det = &det * &m[col][col];
        for r in (col + 1)..n {
            let f = &m[r][col] / &m[col][col];
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] = &m[r][c] - &sub;
            }
        }
    }
    det
}

/// `α(v₁, …, v_p)` at a point: Σ coefficient · det[dc_i(v_j)].
pub fn form_at(form: &ExteriorForm, pt: Point, vectors: &[Tangent]) -> Rational {
    assert_eq!(form.degree(), vectors.len());
    let mut total = Rational::zero();
    for (basis, coeff) in form.terms() {
        let matrix: Vec<Vec<Rational>> = basis
            .iter()
            .map(|c| vectors.iter().map(|v| v.get(c).cloned().unwrap_or_else(Rational::zero)).collect())
            .collect();
        total = &total + &(&eval(coeff, pt) * &determinant(matrix));
    }
    total
}

/// Permutations of `0..n` with their signs.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<(Vec<usize>, i64)>) {
        if prefix.len() == n {
            let mut inversions = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for k in 0..n {
            if !prefix.contains(&k) {
                prefix.push(k);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

/// `(α∧β)(v₁…v_{p+q}) = 1/(p!q!) Σ_σ sgn σ α(v_σ…)β(v_σ…)`.
pub fn wedge_at(a: &ExteriorForm, b: &ExteriorForm, pt: Point, vectors: &[Tangent]) -> Rational {
    let (p, q) = (a.degree(), b.degree());
    let mut total = Rational::zero();
    for (perm, sign) in signed_permutations(p + q) {
        let va: Vec<Tangent> = perm[..p].iter().map(|&i| vectors[i].clone()).collect();
        let vb: Vec<Tangent> = perm[p..].iter().map(|&i| vectors[i].clone()).collect();
        let term = &form_at(a, pt, &va) * &form_at(b, pt, &vb);
        total = &total + &(&term * &Rational::from_int(sign));
    }
    let fact = |k: usize| (1..=k as i64).product::<i64>().max(1);
    &total / &Rational::from_int(fact(p) * fact(q))
}

/// Random tangent vectors over the given coordinates.
pub fn tangents(coords: &[Indeterminate], count: usize, seed: u64) -> Vec<Tangent> {
    (0..count)
        .map(|j| {
            let pt = Point::new(seed.wrapping_mul(31).wrapping_add(j as u64));
            coords.iter().map(|&c| (c, pt.value(c))).collect()
        })
        .collect()
}

/// Raw `su(2)` table `c^r_{pq} = ε_{rpq}`.
pub fn su2_constants() -> Vec<Vec<Vec<i64>>> {
    let mut c = vec![vec![vec![0i64; 3]; 3]; 3];
    for r in 0..3 {
        for p in 0..3 {
            for q in 0..3 {
                c[r][p][q] = levi_civita(&[r, p, q]);
            }
        }
    }
    c
}

/// Sign of a permutation of distinct indices, zero on repeats.
pub fn levi_civita(idx: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in (i + 1)..idx.len() {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `κ_{mn} = tr(ad_m ad_n)` with `(ad_m)_{pq} = c^p_{mq}`.
pub fn killing_by_trace(c: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let d = c.len();
    let ad = |m: usize| -> Vec<Vec<i64>> { (0..d).map(|p| (0..d).map(|q| c[p][m][q]).collect()).collect() };
    let mut k = vec![vec![0; d]; d];
    for m in 0..d {
        for n in 0..d {
            let (am, an) = (ad(m), ad(n));
            let mut tr = 0;
            for p in 0..d {
                for q in 0..d {
                    tr += am[p][q] * an[q][p];
                }
            }
            k[m][n] = tr;
        }
    }
    k
}

/// Brute-force Jacobi residual over all triples.
pub fn jacobi_holds(c: &[Vec<Vec<Rational>>]) -> bool {
    let d = c.len();
    let bracket = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
        (0..d)
            .map(|r| {
                let mut s = Rational::zero();
                for p in 0..d {
                    for q in 0..d {
                        s = &s + &(&(&c[r][p][q] * &x[p]) * &y[q]);
                    }
                }
                s
            })
            .collect()
    };
    let e = |i: usize| -> Vec<Rational> { (0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect() };
    for p in 0..d {
        for q in 0..d {
            for s in 0..d {
                let t1 = bracket(&bracket(&e(p), &e(q)), &e(s));
                let t2 = bracket(&bracket(&e(q), &e(s)), &e(p));
                let t3 = bracket(&bracket(&e(s), &e(p)), &e(q));
                for r in 0..d {
                    if !(&(&t1[r] + &t2[r]) + &t3[r]).is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Numerical 3D reference values at a point, built from the raw `su(2)`
/// table and `b_{mn} = h κ_{mn}`.
pub struct ThreeD {
    pub c: Vec<Vec<Vec<i64>>>,
    pub b: Vec<Vec<Rational>>,
    pub symbolic_b: bool,
}

impl ThreeD {
    pub fn su2(h: Rational, symbolic_b: bool) -> Self {
        let c = su2_constants();
        let k = killing_by_trace(&c);
        let b = k.iter().map(|row| row.iter().map(|&x| &h * &Rational::from_int(x)).collect()).collect();
        ThreeD { c, b, symbolic_b }
    }

    fn dim(&self) -> usize {
        self.c.len()
    }

    fn a(&self, pt: Point, r: usize, mu: usize) -> Rational {
        pt.value(Indeterminate::a(r, mu))
    }

    fn bg(&self, pt: Point, r: usize, mu: usize) -> Rational {
        if self.symbolic_b {
            pt.value(Indeterminate::b(r, mu, &[]))
        } else {
            Rational::zero()
        }
    }

    fn dbg(&self, pt: Point, r: usize, mu: usize, l: usize) -> Rational {
        if self.symbolic_b {
            pt.value(Indeterminate::b(r, mu, &[l]))
        } else {
            Rational::zero()
        }
    }

    fn cc(&self, r: usize, p: usize, q: usize) -> Rational {
        Rational::from_int(self.c[r][p][q])
    }

    /// `ℱ^r_{λμ}` at the point.
    pub fn strength(&self, pt: Point, r: usize, l: usize, mu: usize) -> Rational {
        let mut f = &pt.value(Indeterminate::a_jet(r, mu, &[l])) - &pt.value(Indeterminate::a_jet(r, l, &[mu]));
        for p in 0..self.dim() {
            for q in 0..self.dim() {
                f = &f + &(&self.cc(r, p, q) * &(&self.a(pt, p, l) * &self.a(pt, q, mu)));
            }
        }
        f
    }

    fn strength_b(&self, pt: Point, r: usize, l: usize, mu: usize) -> Rational {
        let mut f = &self.dbg(pt, r, mu, l) - &self.dbg(pt, r, l, mu);
        for p in 0..self.dim() {
            for q in 0..self.dim() {
                f = &f + &(&self.cc(r, p, q) * &(&self.bg(pt, p, l) * &self.bg(pt, q, mu)));
            }
        }
        f
    }

    fn eps_sum<F: FnMut(usize, usize, usize, usize, usize) -> Rational>(&self, alpha: Option<usize>, mut f: F) -> Rational {
        let mut total = Rational::zero();
        for al in 0..3 {
            if alpha.is_some_and(|a| a != al) {
                continue;
            }
            for be in 0..3 {
                for ga in 0..3 {
                    let e = levi_civita(&[al, be, ga]);
                    if e == 0 {
                        continue;
                    }
                    for m in 0..self.dim() {
                        for n in 0..self.dim() {
                            if self.b[m][n].is_zero() {
                                continue;
                            }
                            let w = &self.b[m][n] * &Rational::from_int(e);
                            total = &total + &(&w * &f(m, n, al, be, ga));
                        }
                    }
                }
            }
        }
        total
    }

    /// First two groups of the CS density (the total-derivative group is
    /// handled separately as a polynomial flux).
    pub fn density_without_flux(&self, pt: Point) -> Rational {
        let half = Rational::new(1, 2);
        let third = Rational::new(1, 3);
        let d = self.dim();
        self.eps_sum(None, |m, n, al, be, ga| {
            let mut cubic_a = Rational::zero();
            let mut cubic_b = Rational::zero();
            for p in 0..d {
                for q in 0..d {
                    let c = self.cc(n, p, q);
                    cubic_a = &cubic_a + &(&c * &(&self.a(pt, p, be) * &self.a(pt, q, ga)));
                    cubic_b = &cubic_b + &(&c * &(&self.bg(pt, p, be) * &self.bg(pt, q, ga)));
                }
            }
            let ta = &self.a(pt, m, al) * &(&self.strength(pt, n, be, ga) - &(&third * &cubic_a));
            let tb = &self.bg(pt, m, al) * &(&self.strength_b(pt, n, be, ga) - &(&third * &cubic_b));
            &half * &(&ta - &tb)
        })
    }

    /// Symbolic flux `b ε a^m_β B^n_γ` for component `α`, assembled from the
    /// raw tables.
    pub fn flux(&self, alpha: usize) -> Polynomial {
        let mut out = Polynomial::zero();
        if !self.symbolic_b {
            return out;
        }
        for be in 0..3 {
            for ga in 0..3 {
                let e = levi_civita(&[alpha, be, ga]);
                if e == 0 {
                    continue;
                }
                for m in 0..self.dim() {
                    for n in 0..self.dim() {
                        let w = &self.b[m][n] * &Rational::from_int(e);
                        if w.is_zero() {
                            continue;
                        }
                        out += Polynomial::term(
                            w,
                            jetvar::symbolic::Monomial::from_factors(&[
                                (Indeterminate::a(m, be), 1),
                                (Indeterminate::b(n, ga, &[]), 1),
                            ]),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn density(&self, pt: Point) -> Rational {
        let mut d = self.density_without_flux(pt);
        for alpha in 0..3 {
            d = &d - &total_derivative_at(&self.flux(alpha), alpha, pt);
        }
        d
    }

    fn cov_xi(&self, pt: Point, m: usize, be: usize) -> Rational {
        let mut v = pt.value(Indeterminate::xi(m, &[be]));
        for p in 0..self.dim() {
            for q in 0..self.dim() {
                v = &v + &(&self.cc(m, p, q) * &(&self.a(pt, p, be) * &pt.value(Indeterminate::xi(q, &[]))));
            }
        }
        v
    }

    /// `𝔍^α_CS` at the point.
    pub fn cs_current(&self, pt: Point, alpha: usize) -> Rational {
        self.eps_sum(Some(alpha), |m, n, _, be, ga| {
            &self.cov_xi(pt, m, be) * &(&self.a(pt, n, ga) - &self.bg(pt, n, ga))
        })
    }

    /// Modified current component at the point.
    pub fn modified_current(&self, pt: Point, alpha: usize) -> Rational {
        let d = self.dim();
        self.eps_sum(Some(alpha), |m, n, _, be, ga| {
            let mut v = &Rational::from_int(2) * &(&pt.value(Indeterminate::xi(m, &[be])) * &self.a(pt, n, ga));
            for p in 0..d {
                for q in 0..d {
                    let t = &(&self.a(pt, p, be) * &self.a(pt, n, ga)) * &pt.value(Indeterminate::xi(q, &[]));
                    v = &v + &(&self.cc(m, p, q) * &t);
                }
            }
            v
        })
    }
}

impl ThreeD {
    /// `σ^α = −b_{mn}ε^{αβγ}(∂_βξ^m a^n_γ + (∂_βξ^m + c^m_{pq}a^p_βξ^q)B^n_γ)` as a polynomial.
    pub fn sigma(&self, alpha: usize) -> Polynomial {
        let var = Polynomial::var;
        let mut out = Polynomial::zero();
        for be in 0..3 {
            for ga in 0..3 {
                let e = levi_civita(&[alpha, be, ga]);
                if e == 0 {
                    continue;
                }
                for m in 0..self.dim() {
                    for n in 0..self.dim() {
                        let w = &self.b[m][n] * &Rational::from_int(-e);
                        if w.is_zero() {
                            continue;
                        }
                        let mut cov = var(Indeterminate::xi(m, &[be]));
                        for p in 0..self.dim() {
                            for q in 0..self.dim() {
                                let c = self.cc(m, p, q);
                                if !c.is_zero() {
                                    cov += (&var(Indeterminate::a(p, be)) * &var(Indeterminate::xi(q, &[]))).scale(&c);
                                }
                            }
                        }
                        let mut inner = &var(Indeterminate::xi(m, &[be])) * &var(Indeterminate::a(n, ga));
                        if self.symbolic_b {
                            inner += &cov * &var(Indeterminate::b(n, ga, &[]));
                        }
                        out += inner.scale(&w);
                    }
                }
            }
        }
        out
    }
}
