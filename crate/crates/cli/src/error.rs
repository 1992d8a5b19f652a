use thiserror::Error;

/// Failures of a command, each tied to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("precision not converged at lambda = {lambda}, N = {n}: {message}")]
    NotConverged { lambda: String, n: u32, message: String },
    #[error(transparent)]
    Core(#[from] ggue_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 invalid arguments,
    /// 3 precision not converged.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::InvalidArgs(_) => 2,
            CliError::NotConverged { .. } => 3,
            CliError::Core(e) if e.is_precision_related() => 3,
            CliError::Core(ggue_core::Error::Domain(_)) => 2,
            _ => 1,
        }
    }

    /// Attaches the grid point to precision failures.
    pub fn at_point(e: ggue_core::Error, lambda: &ggue_core::Rational, n: u32) -> Self {
        if e.is_precision_related() {
            CliError::NotConverged { lambda: lambda.to_string(), n, message: e.to_string() }
        } else {
            CliError::Core(e)
        }
    }
}
