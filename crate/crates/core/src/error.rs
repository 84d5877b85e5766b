use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Arguments violate an operation's preconditions (mismatched grids,
    /// wrong representation, wrong component count, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    IterationLimit { iterations: usize, residual: f64 },

    /// The operator vanishes identically, so no leading eigenpair exists.
    #[error("degenerate operator: {0}")]
    Degenerate(String),

    /// Computed data contradicts a structural expectation.
    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    /// A test function does not fit inside the box.
    #[error("invalid test function: {0}")]
    InvalidTest(String),

    /// Unknown name or malformed request at the user boundary.
    #[error("usage error: {0}")]
    Usage(String),

    /// A weight fails the admissibility conditions for the model.
    #[error("inadmissible weight: {0}")]
    Inadmissible(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
