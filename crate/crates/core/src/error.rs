use alloc::string::String;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series or quadrature did not reach the requested accuracy at the
    /// current precision. Callers may escalate and retry.
    #[error("precision not converged: {0}")]
    NotConverged(String),
    /// A Cholesky pivot of the moment matrix was not positive.
    #[error("moment matrix factorization lost positivity at n = {n}")]
    NonPositivePivot { n: usize },
    /// A table does not extend far enough for the requested index.
    #[error("table too short: index {needed} requested, {available} available")]
    Depth { needed: usize, available: usize },
    /// Two independent routes to the same quantity disagree.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// Whether retrying at a higher precision can help.
    pub fn is_precision_related(&self) -> bool {
        matches!(self, Error::NotConverged(_) | Error::NonPositivePivot { .. })
    }
}

pub type Result<T> = core::result::Result<T, Error>;
