use thiserror::Error;

/// Errors raised by the numerical kernel and the state/invariant layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("not Hermitian (max asymmetry {asymmetry:e} > tolerance {tolerance:e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("not positive semi-definite (min eigenvalue {min_eigenvalue:e} below {threshold:e})")]
    NotPositive { min_eigenvalue: f64, threshold: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
