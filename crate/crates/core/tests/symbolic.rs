mod common;

use std::collections::BTreeMap;

use common::{eval, partial_at, Point};
use jetvar::random;
use jetvar::{Error, Indeterminate, Polynomial, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vars() -> Vec<Indeterminate> {
    vec![
        Indeterminate::x(0),
        Indeterminate::x(1),
        Indeterminate::a(0, 0),
        Indeterminate::a_jet(1, 2, &[0]),
        Indeterminate::z(0, &[1]),
        Indeterminate::b(0, 1, &[]),
        Indeterminate::xi(2, &[0]),
    ]
}

fn poly(seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random::polynomial(&mut rng, &vars(), 5, 3)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..200).prop_map(|(n, d)| Rational::new(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Rational::zero());
        if !a.is_zero() {
            prop_assert_eq!(&(&b / &a) * &a, b.clone());
        }
    }

    #[test]
    fn rational_display_round_trip(a in rational()) {
        let s = a.to_string();
        prop_assert!(s.contains('/'));
        prop_assert_eq!(s.parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn polynomial_ring_axioms(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (p, q, r) = (poly(s1), poly(s2), poly(s3));
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn multiplication_is_evaluation_homomorphism(s1 in any::<u64>(), s2 in any::<u64>(), pt in any::<u64>()) {
        let (p, q) = (poly(s1), poly(s2));
        let pt = Point::new(pt);
        prop_assert_eq!(eval(&(&p * &q), pt), &eval(&p, pt) * &eval(&q, pt));
        prop_assert_eq!(eval(&(&p + &q), pt), &eval(&p, pt) + &eval(&q, pt));
    }

    #[test]
    fn partial_matches_interpolation(s in any::<u64>(), pt in any::<u64>(), k in 0usize..7) {
        let p = poly(s);
        let v = vars()[k];
        let pt = Point::new(pt);
        prop_assert_eq!(eval(&p.partial(v), pt), partial_at(&p, v, pt));
    }

    #[test]
    fn substitution_is_evaluation_of_composition(s in any::<u64>(), s2 in any::<u64>(), pt in any::<u64>()) {
        let p = poly(s);
        let q = poly(s2);
        let v = Indeterminate::a(0, 0);
        let q = q.substitute(&BTreeMap::from([(v, Polynomial::zero())])).unwrap();
        let composed = p.substitute(&BTreeMap::from([(v, q.clone())])).unwrap();
        let pt = Point::new(pt);
        let qv = eval(&q, pt);
        prop_assert_eq!(eval(&composed, pt), common::eval_with(&p, |w| if w == v { qv.clone() } else { pt.value(w) }));
    }

    #[test]
    fn display_is_canonical(s in any::<u64>()) {
        let p = poly(s);
        let rebuilt = Polynomial::from_terms(p.terms().map(|(m, c)| (m.clone(), c.clone())).collect::<Vec<_>>().into_iter().rev());
        prop_assert_eq!(p.to_string(), rebuilt.to_string());
    }
}

#[test]
fn display_examples() {
    let p = &(&Polynomial::int(3) + &Polynomial::var(Indeterminate::a(0, 1)))
        - &Polynomial::var(Indeterminate::x(0)).pow(2).scale(&Rational::new(1, 2));
    assert_eq!(p.to_string(), "3/1 + 1/1*a[r=0;mu=1;D=()] + -1/2*x[0]^2");
    assert_eq!(Polynomial::zero().to_string(), "0");
    assert_eq!(Indeterminate::b(1, 0, &[0, 2]).to_string(), "B[r=1;mu=0;D=(0,2)]");
    assert_eq!(Indeterminate::xi(2, &[1]).to_string(), "xi[r=2;D=(1)]");
    assert_eq!(Indeterminate::z(0, &[]).to_string(), "z[A=0;D=()]");
    assert_eq!(Indeterminate::t().to_string(), "t");
}

#[test]
fn monomial_order_is_graded() {
    let x0 = Polynomial::var(Indeterminate::x(0));
    let a = Polynomial::var(Indeterminate::a(0, 0));
    let p = &(&(&x0 * &x0) + &a) + &Polynomial::one();
    let degrees: Vec<u32> = p.terms().map(|(m, _)| m.degree()).collect();
    assert_eq!(degrees, vec![0, 1, 2]);
}

#[test]
fn big_rationals_stay_exact() {
    let big = Rational::new(i64::MAX, 3);
    let sq = &big * &big;
    assert_eq!(&sq / &big, big);
    let p = Polynomial::constant(big.clone()).pow(3);
    assert_eq!(p.as_constant().unwrap(), &sq * &big);
}

#[test]
fn substitution_errors_and_self_reference() {
    let a = Indeterminate::a(0, 0);
    let x = Indeterminate::x(0);
    let t = Polynomial::var(Indeterminate::t());
    let p = &Polynomial::var(a) * &Polynomial::var(x);
    let scaled = p.substitute(&BTreeMap::from([(a, &t * &Polynomial::var(a))])).unwrap();
    assert_eq!(scaled, &t * &p);
    let bad = BTreeMap::from([(a, Polynomial::var(x)), (x, Polynomial::var(a))]);
    assert!(matches!(p.substitute(&bad), Err(Error::CyclicSubstitution { .. })));
}

#[test]
fn integrate_t_examples() {
    let t = Polynomial::var(Indeterminate::t());
    let a = Polynomial::var(Indeterminate::a(0, 0));
    let p = &(&t * &t) * &a;
    assert_eq!(p.integrate_t(), a.scale(&Rational::new(1, 3)));
    assert_eq!(Polynomial::one().integrate_t(), Polynomial::one());
}
