use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed diagram: {0}")]
    Structural(String),
    #[error("signature error: {0}")]
    Signature(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degree {degree} exceeds the configured maximum {max}")]
    Capacity { degree: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("sl2 reduction failed: {0}")]
    Reduction(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
