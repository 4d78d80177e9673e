use ghc_core::checks::CheckError;
use ghc_core::limit::LimitError;
use ghc_core::{DerivError, EvalError, IvfError};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NONEXISTENT: i32 = 4;
pub const EXIT_VIOLATION: i32 = 5;

/// A failed command, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: IvfError },
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Dimension { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::Eval(inner) => inner.into(),
            LimitError::BoundaryStarvation { .. } | LimitError::EmptyRegion => CliError::Domain(e.to_string()),
            LimitError::Schedule(_) | LimitError::Dimension { .. } => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DerivError> for CliError {
    fn from(e: DerivError) -> Self {
        match e {
            DerivError::Limit(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Limit(inner) => inner.into(),
            CheckError::Eval(inner) => inner.into(),
            CheckError::NotSymmetric(_) => CliError::Domain(e.to_string()),
            CheckError::Region { .. } | CheckError::Replay(_) => CliError::Usage(e.to_string()),
        }
    }
}
