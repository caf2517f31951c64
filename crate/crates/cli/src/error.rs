//! CLI error type with process exit-code mapping.

use thiserror::Error;

/// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
/// 4 I/O failure.
#[derive(Error, Debug)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<rosenau_core::Error> for CliError {
    fn from(e: rosenau_core::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}
