use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("entry ({row}, {col}) = {value} cannot be reduced modulo {prime}")]
    FieldIncompatible {
        row: usize,
        col: usize,
        value: String,
        prime: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is outside the supported range 2 <= p < 2^32")]
    PrimeOutOfRange(u64),
    #[error("prime {prime} must exceed the degree {degree}")]
    PrimeTooSmall { prime: u64, degree: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no degree-{degree} form passes through the given {points} points")]
    Overdetermined { degree: usize, points: usize },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certificate rejected at ({n},{d},{k}): {reason}")]
    CertificateRejected {
        n: usize,
        d: usize,
        k: usize,
        reason: String,
    },
    #[error("no grounding found for ({n},{d},{k})")]
    Ungrounded { n: usize, d: usize, k: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
