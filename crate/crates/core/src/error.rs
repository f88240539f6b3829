use thiserror::Error;

/// Errors produced by the geometry, engine, and analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point has a non-finite coordinate")]
    NonFinitePoint,

    #[error("invalid piece: {0}")]
    InvalidPiece(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{op} requires a strong fixed point, but the point classified as {found}")]
    NotStrongFixedPoint { op: &'static str, found: String },

    #[error("derivative bracketing failed: {0}")]
    BracketFailure(String),

    #[error("specialized/generic cross-check diverged: {0}")]
    CrossCheckFailed(String),

    #[error("product piece count {count} exceeds cap {cap}")]
    TupleExplosion { count: usize, cap: usize },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("trace error: {0}")]
    Trace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
