//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Stationary quantities requested for a model with nonnegative mean drift.
    #[error("stability error: {0}")]
    Stability(String),

    /// A pole was hit (rate equals an exponent value, or colliding rates).
    #[error("singular parameters: {0}; perturb the rates slightly and retry")]
    SingularParameters(String),

    /// Case excluded from the implementation (e.g. equal rates in an oracle).
    #[error("unsupported case: {0}")]
    Unsupported(String),

    /// Phase count above the configured cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A numerical procedure failed to converge; diagnostics included.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// An internal cross-check failed.
    #[error("internal consistency: {0}")]
    Inconsistency(String),

    /// Malformed configuration input.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command line front end:
    /// 2 for validation problems, 3 for numeric ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Stability(_)
            | Error::Unsupported(_)
            | Error::Capacity(_)
            | Error::Config(_)
            | Error::Io(_) => 2,
            Error::SingularParameters(_) | Error::Numeric(_) | Error::Inconsistency(_) => 3,
        }
    }
}
