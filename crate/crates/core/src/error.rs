use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive oracle was asked to run beyond the size it supports.
    #[error("refusing oracle computation: {0}")]
    OracleScale(String),
    /// A floating-point evaluation lost all significant digits.
    #[error("loss of precision: {0}")]
    LossOfPrecision(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
