use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("divergent multiple zeta value index {0}")]
    Divergent(String),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
