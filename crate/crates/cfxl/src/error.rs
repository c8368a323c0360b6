//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A geometric or physical quantity hit a pole (zero distance, coincident
    /// antenna elements).
    #[error("singularity: {0}")]
    Singularity(String),

    /// Numerical failure (singular covariance, non-finite gradient, ...).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// An operation was called before its prerequisites were established.
    #[error("state error: {0}")]
    State(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
