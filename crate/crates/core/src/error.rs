use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("index {index} out of range 1..={size}")]
    IndexOutOfRange { index: String, size: String },

    #[error("no prime found in [{lo}, {hi}]")]
    NoPrimeFound { lo: String, hi: String },

    #[error("solution shape does not match the instance: {0}")]
    ShapeMismatch(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
