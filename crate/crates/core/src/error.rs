use thiserror::Error;

/// Errors raised by the numerical and physical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("eigen-solver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("positivity violated: {0}")]
    PositivityViolation(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("argument outside its domain: {0}")]
    DomainError(String),

    #[error("could not reach target after {attempts} attempts: {reason}")]
    TargetUnreachable { attempts: usize, reason: String },

    #[error("system too large: {0}")]
    SizeTooLarge(String),

    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
