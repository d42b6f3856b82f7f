use thiserror::Error;

/// Errors raised by the numerical kernels, model spaces and verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method ran out of iterations.
    #[error("no convergence after {iterations} iterations in {what}; last bracket [{lo}, {hi}]")]
    Convergence {
        what: &'static str,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    /// The operation needs geometric data the space does not model.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Input data broke a structural invariant (monotonicity, metric axioms, ...).
    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
