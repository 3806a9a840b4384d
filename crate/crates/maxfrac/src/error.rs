//! Error type shared by all modules.
//!
//! Non-convergence of an iteration is deliberately *not* an error: iterative
//! routines return a result struct carrying the trace and a convergence flag,
//! so a run that hits its iteration budget still hands back everything it
//! computed. Errors are reserved for invalid inputs and violated contracts.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Construction or validation failed; the message names the offending field.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Two values that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    /// A size cap was exceeded (word enumeration, transport atoms, atom growth).
    #[error("{what} cap exceeded: limit {limit}, requested {requested}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    /// A value that must be finite is NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Transport between measures whose total masses differ beyond tolerance.
    #[error("unequal total masses: {mu} vs {nu}")]
    UnequalMass { mu: f64, nu: f64 },

    /// An atom of a measure lies outside the declared ground set.
    #[error("atom {index} lies outside the ground set (nearest ground point at distance {dist})")]
    AtomOutsideGround { index: usize, dist: f64 },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
