use thiserror::Error;

/// Errors raised by the engine.
///
/// Identity-check failures are normally reported through
/// [`VerificationReport`](crate::report::VerificationReport); the variants
/// carrying a residual are the ones where an operation cannot return a
/// meaningful value.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),
    #[error("cyclic substitution: value bound to {bound} mentions {mentioned}")]
    CyclicSubstitution { bound: String, mentioned: String },
    #[error("jet order exceeded: {symbol} cannot be raised beyond order {max}")]
    JetOrderExceeded { symbol: String, max: usize },
    #[error("{0} is not a coordinate of the chart")]
    NotInChart(String),
    #[error("form is not horizontal: contains d{0}")]
    NotHorizontal(String),
    #[error("Lagrangian is not first order: depends on {0}")]
    NotFirstOrder(String),
    #[error("vector field is not vertical: component on {0}")]
    NotVertical(String),
    #[error("expected a form of degree {expected}, got {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("antisymmetry violated: c^{r}_{{{p}{q}}} = {pq} but c^{r}_{{{q}{p}}} = {qp}")]
    AntisymmetryViolation { r: usize, p: usize, q: usize, pq: String, qp: String },
    #[error("Jacobi identity violated for (p,q,s) = ({p},{q},{s}), component r = {r}: residual {value}")]
    JacobiViolation { p: usize, q: usize, s: usize, r: usize, value: String },
    #[error("invalid invariant tensor: {0}")]
    InvalidTensor(String),
    #[error("tensor is not ad-invariant: {0}")]
    NotAdInvariant(String),
    #[error("form is not closed; d of it has {terms} terms")]
    NotClosed { terms: usize, residual: String },
    #[error("homotopy primitive leaves a nonzero residual ({terms} terms)")]
    NonzeroResidual { terms: usize, residual: String },
    #[error("boundary term check failed: d_H sigma differs from the Lie derivative ({terms} terms)")]
    SigmaMismatch { terms: usize, residual: String },
    #[error("Lagrangian is not gauge invariant ({terms} residual terms)")]
    NotInvariant { terms: usize, residual: String },
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
