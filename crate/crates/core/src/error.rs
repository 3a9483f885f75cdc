use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("payoff callback: {0}")]
    Callback(String),
    #[error("profile space too large: {0}")]
    Capacity(String),
    #[error("zero-mass block: {0}")]
    ZeroMassBlock(String),
    #[error("conversion failed: {0}")]
    Conversion(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
