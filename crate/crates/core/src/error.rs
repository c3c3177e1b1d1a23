use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("out of supported range: {0}")]
    Range(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient data: {0}")]
    Coverage(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
