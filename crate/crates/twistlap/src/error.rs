//! Failure classes and their exit codes.

use thiserror::Error;

/// Exit code for a violated bound.
pub const EXIT_VIOLATION: u8 = 1;
/// Exit code for usage and configuration errors.
pub const EXIT_USAGE: u8 = 2;
/// Exit code for numerical failures.
pub const EXIT_NUMERICAL: u8 = 3;

/// Errors surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid flags, parameters outside a formula's hypotheses.
    #[error("{0}")]
    Usage(String),
    /// Solver non-convergence or an inconsistent eigenpair.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Output could not be written.
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code of this failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

impl From<twistlap_core::Error> for CliError {
    fn from(e: twistlap_core::Error) -> Self {
        if twistlap_core::verify::is_numerical_failure(&e) {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}
