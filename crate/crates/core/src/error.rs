use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants are grouped so the command-line front end can map them onto
/// distinct exit codes: input problems, convergence failures and
/// singularities.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("pole of {what} at {at}")]
    Pole { what: &'static str, at: Complex64 },

    #[error("pole of the L-operator at column {column} (lambda - mu = {at})")]
    ColumnPole { column: usize, at: Complex64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("no convergence after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence { iterations: usize, best_residual: f64 },

    #[error("roots {first} and {second} collide; quantum numbers are not admissible")]
    RootCollision { first: usize, second: usize },

    #[error("singular {0}")]
    Singular(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("grid not converged: doubling the grid changed {quantity} by {change:e}")]
    GridNotConverged { quantity: &'static str, change: f64 },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(e: impl std::fmt::Display) -> Self {
        Error::Io(e.to_string())
    }

    pub(crate) fn singular(msg: impl Into<String>) -> Self {
        Error::Singular(msg.into())
    }

    /// Broad category used for process exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::Precondition(_)
            | Error::Io(_) => ErrorKind::Input,
            Error::NoConvergence { .. } | Error::GridNotConverged { .. } => {
                ErrorKind::Convergence
            }
            Error::Pole { .. }
            | Error::ColumnPole { .. }
            | Error::RootCollision { .. }
            | Error::Singular(_) => ErrorKind::Singularity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Convergence,
    Singularity,
}

pub type Result<T> = std::result::Result<T, Error>;
