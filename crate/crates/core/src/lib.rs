//! Exact symbolic calculus on jet bundles of principal-connection bundles:
//! polynomial arithmetic over the rationals, exterior forms, total
//! derivatives, gauge generators, Chern–Simons Lagrangians and the
//! variational machinery (Euler–Lagrange, Noether currents, conservation
//! laws) needed to verify their identities term by term.

pub mod chern_simons;
pub mod closed_form;
pub mod error;
pub mod forms;
pub mod gauge;
pub mod jet;
pub mod random;
pub mod report;
pub mod symbolic;
pub mod variational;

pub use chern_simons::{Background, CsData};
pub use error::{Error, Result};
pub use forms::{Chart, ExteriorForm, VectorField};
pub use gauge::{InvariantTensor, LieAlgebra};
pub use jet::{FieldSpec, JetContext};
pub use report::{Status, VerificationReport};
pub use symbolic::{Indeterminate, Kind, MultiIndex, Polynomial, Rational};
pub use variational::{Current, ElResult, HomotopyCenter, Lagrangian};
