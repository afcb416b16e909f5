use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unreadable inputs or an unwritable output path.
    #[error("configuration error: {0}")]
    Config(String),

    /// A computation on valid inputs failed.
    #[error("numerical failure: {0}")]
    Numeric(pairstab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

/// Errors about the inputs themselves are configuration errors; failures of
/// the numerical routines on valid inputs are numerical.
impl From<pairstab::Error> for CliError {
    fn from(e: pairstab::Error) -> Self {
        use pairstab::Error as E;
        match e {
            E::DomainError(_)
            | E::Parse(_)
            | E::InvalidState(_)
            | E::NotNormalized { .. }
            | E::PositivityViolation(_)
            | E::SizeTooLarge(_)
            | E::IndexOutOfRange(_)
            | E::NonHermitian { .. } => CliError::Config(e.to_string()),
            E::NoConvergence { .. } | E::NotSquare { .. } | E::DimensionMismatch(_) | E::TargetUnreachable { .. } => {
                CliError::Numeric(e)
            }
        }
    }
}
