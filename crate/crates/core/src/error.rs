use thiserror::Error;

/// Errors raised by the library. Validation errors describe bad input,
/// invariant violations mean an internal check failed (a bug, not bad input).
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("root finder did not converge after {iterations} iterations (max correction {max_step:e})")]
    NonConvergence {
        iterations: usize,
        max_step: f64,
        /// Last iterates, so callers can still inspect them.
        partial: Vec<num_complex::Complex64>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit code for the CLI: 2 for bad input, 3 for failed invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Json(_) => 2,
            Error::Invariant(_) | Error::NonConvergence { .. } => 3,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}
