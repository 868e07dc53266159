use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands live in different coefficient rings")]
    RingMismatch,
    #[error("coefficient rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("logarithm needs constant term equal to the identity")]
    NonUnital,
    #[error("series is not nilpotent: a term of formal degree zero lies off the constant monomial")]
    NotNilpotent,
    #[error("bracket leaves the algebra: exponents {0} and its opposite interact")]
    DomainViolation(String),
    #[error("invalid wall: {0}")]
    InvalidWall(String),
    #[error("loop basepoint lies on a wall")]
    BasepointOnWall,
    #[error("genericity could not be achieved: {0}")]
    Genericity(String),
    #[error("truncation order too low: {0}")]
    InsufficientOrder(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
