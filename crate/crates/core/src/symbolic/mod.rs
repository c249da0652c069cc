//! Exact-rational polynomial kernel.

mod indeterminate;
mod polynomial;
mod rational;

pub use indeterminate::{Indeterminate, Kind, MultiIndex, MAX_DERIV};
pub use polynomial::{max_terms, set_max_terms, Monomial, Polynomial, TermLimitExceeded};
pub use rational::Rational;
