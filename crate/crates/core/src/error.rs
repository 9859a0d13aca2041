use thiserror::Error;

use crate::roots::SolveError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("unsupported estimator: {0}")]
    Unsupported(String),

    /// The data cannot support the requested quantity (zero accumulators, zero moment, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("sketch merge mismatch: {0}")]
    MergeMismatch(String),

    /// A signal entry is negative at evaluation time.
    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error(transparent)]
    Solver(#[from] SolveError),

    #[error("serialization: {0}")]
    Serialization(String),
}
