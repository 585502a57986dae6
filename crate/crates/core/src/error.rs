use thiserror::Error;

/// Errors raised by the algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of size {size} exceeds the configured bound {bound}")]
    FieldTooLarge { size: u128, bound: u64 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid tower level {level} (tower has {levels} levels)")]
    InvalidLevel { level: usize, levels: usize },
    #[error("{from} is not a subfield of {into}")]
    NoSubfield { from: String, into: String },
    #[error("q-degree {degree} is not smaller than n = {n}")]
    DegreeTooLarge { degree: usize, n: usize },
    #[error("index {ell} is out of range for n = {n}")]
    InvalidIndex { ell: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
