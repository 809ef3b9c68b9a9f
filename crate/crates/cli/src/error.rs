use std::fmt::Display;
use std::process::ExitCode;

use thiserror::Error;

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config or input state. Exit code 2.
    #[error("invalid input: {0}")]
    Validation(String),
    /// The computation failed after its partial report was written. Exit code 3.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Reading or writing files failed. Exit code 1.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn validation(e: impl Display) -> Self {
        CliError::Validation(e.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        })
    }
}
