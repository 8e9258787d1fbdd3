use thiserror::Error;

/// Errors raised by the geometry kernel and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation (negative side
    /// length, arclength outside the curve, |t| > a, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An input object violates its structural invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// A numerical procedure failed in a way that valid input should never
    /// produce.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
