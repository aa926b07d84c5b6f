//! Command-line front end: `generate` writes paths with a reproducible
//! manifest, `verify` runs pass/fail checks.

use std::fmt;
use std::process::ExitCode;

use hermsynth_core::Error;

pub mod args;
pub mod generate;
pub mod verify;

pub use args::Cli;

/// Exit status for invalid flags or budgets.
pub const EXIT_USAGE: u8 = 2;
/// Exit status for failed checks and runtime errors.
pub const EXIT_FAILURE: u8 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn usage(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAILURE,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Domain(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}
