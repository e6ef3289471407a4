use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid excitation: {0}")]
    InvalidExcitation(String),

    #[error("zero-norm state")]
    ZeroNorm,

    #[error("ambiguous kernel: {0}")]
    AmbiguousKernel(String),

    #[error("identity violation: {0}")]
    IdentityViolation(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
