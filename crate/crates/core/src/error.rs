use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),
    /// A region or expression fails structural validation.
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    /// The requested combination of scheme and parameters is not supported.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// Too few qualifying data points to run a fit.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// Two independent computation routes disagree beyond tolerance.
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
