use thiserror::Error;

/// Errors raised by constructors, operators and harnesses.
///
/// Divergent integrals are not errors: they surface as `f64::INFINITY`
/// so that growth-rate harnesses can observe them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Evaluation requested where the operator is singular, e.g. a principal
    /// value taken exactly at a breakpoint.
    #[error("numerical domain error at x = {x}: {reason}")]
    NumericalDomain { x: f64, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
