use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A size or support cap was exceeded.
    #[error("resource limit exceeded: {what} is {size}, cap is {cap}")]
    Resource {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    /// A determinant was requested for a matrix that is not numerically positive definite.
    #[error("not positive definite at working precision (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    /// The dense eigensolver or SVD failed to converge.
    #[error("dense solver failed: {0}")]
    Solver(String),
    /// Malformed text input.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no predicted limit: {0}")]
    NoPrediction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
