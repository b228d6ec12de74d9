use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A parameter sits on a degenerate value (e.g. sin(mτ) ≈ 0).
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    /// An exact computation produced a remainder or a non-integral value.
    #[error("internal exactness failure: {0}")]
    Inexact(String),
    /// A size cap was exceeded.
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    /// A numerical procedure could not reach a verdict.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    /// The enumeration window does not contain every relevant index.
    #[error("window too small: {0}")]
    WindowTooSmall(String),
}

pub type Result<T> = std::result::Result<T, Error>;
