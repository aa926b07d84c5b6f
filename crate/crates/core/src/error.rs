use thiserror::Error;

/// Errors reported by the synthesis library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A function was evaluated outside its domain (non-finite input, time outside a path).
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine failed to reach its accuracy target.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A statistical estimate could not be formed.
    #[error("estimation error: {0}")]
    Estimation(String),
    /// Internal inconsistency, e.g. a table lookup outside the precomputed range.
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
