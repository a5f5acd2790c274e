//! Error type shared by every module of the crate.

use alloc::string::String;

/// Errors reported by assembly, solvers, oracles and verification.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its admissible range (wrong geometry kind,
    /// non-positive volume, `k` larger than the problem, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The inputs violate a hypothesis of the formula being evaluated
    /// (for example a non-negative degree where a negative one is required).
    #[error("out of hypothesis: {0}")]
    OutOfHypothesis(String),
    /// A closed-form expression would leave its real domain
    /// (square root of a negative number, negative eigenvalue input, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative solver hit its iteration cap.
    #[error("eigensolver did not converge after {iterations} restarts (best residual {best_residual:e})")]
    Convergence {
        /// Restart cycles performed before giving up.
        iterations: usize,
        /// Largest residual among the pairs that were still being refined.
        best_residual: f64,
    },
    /// An eigenpair handed to a post-processing routine does not satisfy
    /// its eigen-equation to the required accuracy.
    #[error("stale eigenpair: residual {residual:e} exceeds {limit:e}")]
    StaleEigenpair {
        /// Measured residual `‖Δψ − λψ‖ / ‖ψ‖`.
        residual: f64,
        /// Admissible residual.
        limit: f64,
    },
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
