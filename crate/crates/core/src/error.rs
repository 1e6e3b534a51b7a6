use thiserror::Error;

/// Errors surfaced by the library.
///
/// The split between variants mirrors how callers should react: data and
/// distribution problems come from malformed inputs, parameter problems from
/// an impossible configuration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
