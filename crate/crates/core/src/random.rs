//! Seeded generators for random polynomials, Lagrangians, vector fields and
//! forms used by property tests and self-tests.

use rand::Rng;

use crate::forms::{Chart, ExteriorForm, VectorField};
use crate::jet::JetContext;
use crate::symbolic::{Indeterminate, Monomial, Polynomial, Rational};
use crate::variational::Lagrangian;

/// Nonzero rational with numerator in `[-9, 9]` and denominator in `[1, 5]`.
pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-9..=9);
        if n != 0 {
            return Rational::new(n, rng.gen_range(1..=5));
        }
    }
}

/// Polynomial with up to `terms` monomials of degree at most `max_degree`
/// in the given variables.
pub fn polynomial<R: Rng>(rng: &mut R, vars: &[Indeterminate], terms: usize, max_degree: u32) -> Polynomial {
    let mut out = Polynomial::zero();
    for _ in 0..terms {
        let degree = rng.gen_range(0..=max_degree);
        let mut factors: Vec<(Indeterminate, u32)> = Vec::new();
        for _ in 0..degree {
            if vars.is_empty() {
                break;
            }
            let v = vars[rng.gen_range(0..vars.len())];
            match factors.iter_mut().find(|(w, _)| *w == v) {
                Some(f) => f.1 += 1,
                None => factors.push((v, 1)),
            }
        }
        out += Polynomial::term(rational(rng), Monomial::from_factors(&factors));
    }
    out
}

/// Base coordinates and order-0 field coordinates.
pub fn order_zero_variables(ctx: &JetContext) -> Vec<Indeterminate> {
    let mut vars: Vec<Indeterminate> = (0..ctx.base_dim()).map(Indeterminate::x).collect();
    vars.extend(ctx.field_coordinates());
    vars
}

/// Order-0 variables plus all first jets of the fields.
pub fn first_order_variables(ctx: &JetContext) -> Vec<Indeterminate> {
    let mut vars = order_zero_variables(ctx);
    for y in ctx.field_coordinates() {
        for l in 0..ctx.base_dim() {
            vars.push(y.derive(l).expect("order-0 field"));
        }
    }
    vars
}

/// Random first-order Lagrangian of degree at most 3.
pub fn first_order_lagrangian<R: Rng>(rng: &mut R, ctx: &JetContext) -> Lagrangian {
    let vars = first_order_variables(ctx);
    let terms = rng.gen_range(1..=6);
    Lagrangian::new(ctx.base_dim(), polynomial(rng, &vars, terms, 3)).expect("first order by construction")
}

/// Random vertical field with components on every order-0 field coordinate.
pub fn vertical_field<R: Rng>(rng: &mut R, ctx: &JetContext) -> VectorField {
    let vars = order_zero_variables(ctx);
    let mut u = VectorField::new();
    for y in ctx.field_coordinates() {
        let terms = rng.gen_range(0..=3);
        u.set(y, polynomial(rng, &vars, terms, 2));
    }
    u
}

/// Random form of the given degree on the chart: a few basis terms with
/// random coefficients in the chart coordinates.
pub fn form<R: Rng>(rng: &mut R, chart: Chart, degree: usize, terms: usize) -> ExteriorForm {
    let coords = chart.coordinates();
    let mut out = ExteriorForm::zero(chart, degree);
    for _ in 0..terms {
        let basis: Vec<Indeterminate> = (0..degree).map(|_| coords[rng.gen_range(0..coords.len())]).collect();
        let coeff = polynomial(rng, &coords, 2, 2);
        out += &ExteriorForm::monomial(chart, coeff, &basis).expect("chart coordinates");
    }
    out
}
