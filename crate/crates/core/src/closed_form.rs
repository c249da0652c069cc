//! Closed-form 3D expressions for a quadratic invariant `b_{mn}`, written
//! index by index with the Levi-Civita symbol. They serve as reference
//! values against which the general constructions are compared.

use crate::chern_simons::{background_strength, field_strength, Background};
use crate::error::{Error, Result};
use crate::gauge::{InvariantTensor, LieAlgebra};
use crate::jet::{total_derivative, JetContext};
use crate::symbolic::{Indeterminate, Polynomial, Rational};
use crate::variational::Current;

/// Non-vanishing `ε^{αβγ}` on three indices, with sign.
pub fn levi_civita_3() -> [(usize, usize, usize, i64); 6] {
    [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1), (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)]
}

fn check(alg: &LieAlgebra, b: &InvariantTensor, ctx: &JetContext) -> Result<()> {
    if b.degree() != 2 || b.dim() != alg.dim() {
        return Err(Error::InvalidTensor("3D closed forms need a quadratic tensor on the algebra".into()));
    }
    if ctx.base_dim() != 3 || ctx.fields().gauge_dim != alg.dim() {
        return Err(Error::Unsupported("3D closed forms need a 3-dimensional connection jet space".into()));
    }
    Ok(())
}

fn a(r: usize, mu: usize) -> Polynomial {
    Polynomial::var(Indeterminate::a(r, mu))
}

fn dxi(r: usize, beta: usize) -> Polynomial {
    Polynomial::var(Indeterminate::xi(r, &[beta]))
}

fn xi(r: usize) -> Polynomial {
    Polynomial::var(Indeterminate::xi(r, &[]))
}

fn bg(background: Background, r: usize, mu: usize) -> Polynomial {
    match background {
        Background::Zero => Polynomial::zero(),
        Background::Symbolic => Polynomial::var(Indeterminate::b(r, mu, &[])),
    }
}

/// `∂_βξ^m + c^m_{pq}a^p_βξ^q`.
fn covariant_xi(alg: &LieAlgebra, m: usize, beta: usize) -> Polynomial {
    let mut out = dxi(m, beta);
    for (r, p, q, c) in alg.nonzero_constants() {
        if r == m {
            out += (&a(p, beta) * &xi(q)).scale(&c);
        }
    }
    out
}

/// Sum over `m, n` with `b_{mn} ≠ 0` and over `ε^{αβγ}` for fixed `α` of
/// `ε b_{mn} f(m, n, β, γ)`.
fn contract<F>(b: &InvariantTensor, alpha: usize, mut f: F) -> Polynomial
where
    F: FnMut(usize, usize, usize, usize) -> Polynomial,
{
    let mut out = Polynomial::zero();
    for (idx, v) in b.nonzero_entries() {
        for (al, beta, gamma, sign) in levi_civita_3() {
            if al != alpha {
                continue;
            }
            out += f(idx[0], idx[1], beta, gamma).scale(&(&v * &Rational::from_int(sign)));
        }
    }
    out
}

/// CS density in three groups:
/// `½b_{mn}ε^{αβγ}a^m_α(ℱ^n_{βγ} − ⅓c^n_{pq}a^p_βa^q_γ)
///  − ½b_{mn}ε^{αβγ}B^m_α(F(B)^n_{βγ} − ⅓c^n_{pq}B^p_βB^q_γ)
///  − d_α(b_{mn}ε^{αβγ}a^m_βB^n_γ)`.
pub fn cs_density(alg: &LieAlgebra, b: &InvariantTensor, background: Background, ctx: &JetContext) -> Result<Polynomial> {
    check(alg, b, ctx)?;
    let half = Rational::new(1, 2);
    let third = Rational::new(1, 3);
    let constants = alg.nonzero_constants();
    let cubic = |m: usize, beta: usize, gamma: usize, pot: &dyn Fn(usize, usize) -> Polynomial| {
        let mut out = Polynomial::zero();
        for (r, p, q, c) in &constants {
            if *r == m {
                out += (&pot(*p, beta) * &pot(*q, gamma)).scale(c);
            }
        }
        out.scale(&third)
    };
    let mut density = Polynomial::zero();
    for alpha in 0..3 {
        density += contract(b, alpha, |m, n, beta, gamma| {
            let inner = &field_strength(alg, n, beta, gamma) - &cubic(n, beta, gamma, &a);
            (&a(m, alpha) * &inner).scale(&half)
        });
        if background == Background::Symbolic {
            let pot = |r: usize, mu: usize| bg(background, r, mu);
            density -= contract(b, alpha, |m, n, beta, gamma| {
                let inner = &background_strength(alg, n, beta, gamma) - &cubic(n, beta, gamma, &pot);
                (&pot(m, alpha) * &inner).scale(&half)
            });
            let flux = contract(b, alpha, |m, n, beta, gamma| &a(m, beta) * &pot(n, gamma));
            density -= total_derivative(&flux, alpha, ctx)?;
        }
    }
    Ok(density)
}

/// `σ^α = −b_{mn}ε^{αβγ}(∂_βξ^m a^n_γ + (∂_βξ^m + c^m_{pq}a^p_βξ^q)B^n_γ)`.
pub fn sigma_current(alg: &LieAlgebra, b: &InvariantTensor, background: Background, ctx: &JetContext) -> Result<Current> {
    check(alg, b, ctx)?;
    Ok(Current::new(
        (0..3)
            .map(|alpha| {
                -contract(b, alpha, |m, n, beta, gamma| {
                    &(&dxi(m, beta) * &a(n, gamma)) + &(&covariant_xi(alg, m, beta) * &bg(background, n, gamma))
                })
            })
            .collect(),
    ))
}

/// Density of `𝐋_{J¹ξ_C}L_CS = d_ασ^α`.
pub fn lie_derivative_density(
    alg: &LieAlgebra,
    b: &InvariantTensor,
    background: Background,
    ctx: &JetContext,
) -> Result<Polynomial> {
    sigma_current(alg, b, background, ctx)?.divergence(ctx)
}

/// Noether current `𝔍^α_CS = b_{mn}ε^{αβγ}(∂_βξ^m + c^m_{pq}a^p_βξ^q)(a^n_γ − B^n_γ)`.
pub fn cs_noether_current(
    alg: &LieAlgebra,
    b: &InvariantTensor,
    background: Background,
    ctx: &JetContext,
) -> Result<Current> {
    check(alg, b, ctx)?;
    Ok(Current::new(
        (0..3)
            .map(|alpha| {
                contract(b, alpha, |m, n, beta, gamma| {
                    &covariant_xi(alg, m, beta) * &(&a(n, gamma) - &bg(background, n, gamma))
                })
            })
            .collect(),
    ))
}

/// Modified current `b_{mn}ε^{αβγ}(2∂_βξ^m a^n_γ + c^m_{pq}a^p_βa^n_γξ^q)`.
pub fn modified_current(alg: &LieAlgebra, b: &InvariantTensor, ctx: &JetContext) -> Result<Current> {
    check(alg, b, ctx)?;
    let constants = alg.nonzero_constants();
    Ok(Current::new(
        (0..3)
            .map(|alpha| {
                contract(b, alpha, |m, n, beta, gamma| {
                    let mut term = (&dxi(m, beta) * &a(n, gamma)).scale(&Rational::from_int(2));
                    for (r, p, q, c) in &constants {
                        if *r == m {
                            term += (&(&a(*p, beta) * &a(n, gamma)) * &xi(*q)).scale(c);
                        }
                    }
                    term
                })
            })
            .collect(),
    ))
}

/// Component-wise difference `computed − reference`, one labelled line per
/// nonzero monomial.
pub fn current_diff(computed: &Current, reference: &Current) -> Vec<String> {
    let mut lines = Vec::new();
    for (l, (c, r)) in computed.components().iter().zip(reference.components()).enumerate() {
        let d = c - r;
        for (m, coeff) in d.terms() {
            lines.push(format!("J^{l} : {}", Polynomial::term(coeff.clone(), m.clone())));
        }
    }
    lines
}
