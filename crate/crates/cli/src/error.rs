use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// An asserted check failed.
    pub const FAILED: i32 = 1;
    /// Bad arguments, configuration or parameters.
    pub const USAGE: i32 = 2;
    /// A factorization or enumeration budget ran out.
    pub const BUDGET: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Budget(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Budget(_) => exit::BUDGET,
            CliError::Failed(_) | CliError::Other(_) => exit::FAILED,
        }
    }
}

impl From<ellprim_core::Error> for CliError {
    fn from(err: ellprim_core::Error) -> Self {
        use ellprim_core::Error as E;
        match err {
            E::InvalidParams { .. }
            | E::PreconditionViolation { .. }
            | E::Domain { .. }
            | E::NotUnitary { .. }
            | E::BitBudgetExceeded { .. } => CliError::Usage(err.to_string()),
            E::FactorizationExceeded(_) | E::IncompleteFactorization { .. } | E::EnumerationTooLarge { .. } => {
                CliError::Budget(err.to_string())
            }
            E::Mismatch { .. } | E::CongruenceViolation { .. } => CliError::Failed(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Other(err.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Other(err.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Other(err.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
