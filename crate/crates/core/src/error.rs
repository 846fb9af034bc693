use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear part is not invertible over GF(2)")]
    NotInvertible,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("duplicate state {0} in cycle structure")]
    DuplicateState(u32),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("computation guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
