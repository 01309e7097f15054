use std::process::ExitCode;

use hausdorff_core::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical divergence: {0}")]
    Divergence(Error),

    #[error("{0}")]
    Numeric(Error),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Divergent { .. } | Error::NonFinite { .. } => CliError::Divergence(e),
            Error::InvalidArgument(_) | Error::Hypothesis(_) | Error::ParamNearBoundary { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Verification(_) => ExitCode::from(1),
            CliError::Config(_) | CliError::Numeric(_) | CliError::Io(_) => ExitCode::from(2),
            CliError::Divergence(_) => ExitCode::from(3),
        }
    }
}
