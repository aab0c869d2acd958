use thiserror::Error;

use crate::model::FeasibilityReport;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("candidate is infeasible: {}", .0.summary())]
    Infeasible(Box<FeasibilityReport>),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("size guard exceeded: {0}")]
    Size(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("generation failed: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}
