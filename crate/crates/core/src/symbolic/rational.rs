//! Exact rational numbers.
//!
//! Values whose reduced numerator and denominator fit in an `i64` are kept
//! inline; everything else falls back to `BigRational`. The representation is
//! canonical (a value that fits inline is never stored big), so structural
//! equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    // reduced, den > 0
    Small(i64, i64),
    Big(Box<BigRational>),
}

/// Exact rational number, always reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// `num / den`; panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = gcd_i128(num, den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new(BigRational::new(
                BigInt::from(n),
                BigInt::from(d),
            )))),
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        // BigRational is already reduced.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Rational(Repr::Small(n, d));
        }
        Rational(Repr::Big(Box::new(r)))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn recip(&self) -> Rational {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    pub fn pow(&self, e: u32) -> Rational {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    Rational::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                    match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                        (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                            Some(s) => Rational::from_i128(s, z),
                            None => Rational::from_big(self.to_big() + rhs.to_big()),
                        },
                        _ => Rational::from_big(self.to_big() + rhs.to_big()),
                    }
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                // i64 * i64 always fits in i128
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self * &rhs.recip()
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational(Repr::Small(m, *d)),
                None => Rational::from_big(-self.to_big()),
            },
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = &*self * rhs;
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Always `num/den`, including integers (`2/1`, `0/1`).
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p/q` or a bare integer `p`. Decimal points are rejected.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidRational(s.to_string());
        let s_trim = s.trim();
        let (num, den) = match s_trim.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s_trim, "1"),
        };
        let n = BigInt::from_str(num).map_err(|_| bad())?;
        let d = BigInt::from_str(den).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        let g = n.gcd(&d);
        let (mut n, mut d) = if g.is_one() || g.is_zero() { (n, d) } else { (&n / &g, &d / &g) };
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Ok(Rational::from_big(BigRational::new_raw(n, d)))
    }
}
