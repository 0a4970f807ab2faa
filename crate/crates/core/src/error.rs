use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not converge on [{a}, {b}] at tolerance {tol:e}")]
    QuadratureDivergence { a: f64, b: f64, tol: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("parameter grid is not uniform")]
    NonUniformGrid,

    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
