use thiserror::Error;

/// Errors raised by the exact and numeric engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand mismatch: sqrt({0}) vs sqrt({1})")]
    RadicandMismatch(String, String),
    #[error("invalid radicand {0}: must be positive")]
    InvalidRadicand(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("zero polynomial has no well-defined root structure")]
    ZeroPolynomial,
    #[error("Lie algebra is not solvable")]
    NotSolvable,
    #[error("malformed splitting: {0}")]
    MalformedSplitting(String),
    #[error("inconsistent conjugate bracket relation: {0}")]
    InconsistentConjugate(String),
    #[error("point outside the coordinate domain: {0}")]
    OutOfDomain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
