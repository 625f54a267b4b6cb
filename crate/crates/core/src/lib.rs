//! Padé approximants of Markov-type and definitizable functions computed
//! through P-fractions and generalized Jacobi matrices.

pub mod arith;
pub mod error;

pub use error::{Error, Result};
pub mod defclass;
pub mod gapgeometry;
pub mod hankel;
pub mod measures;
pub mod pade;
pub mod pfraction;
pub mod recurrence;
pub mod scenario;
