//! Command-line front end for the interferometer simulator: configuration
//! parsing, deterministic dataset generation, analysis drivers, and plot /
//! table emitters.

use std::fmt;

pub mod commands;
pub mod config;
pub mod io;
pub mod manifest;
pub mod reference;
pub mod svg;

/// Process exit code for usage and configuration problems.
pub const EXIT_USAGE: i32 = 2;
/// Process exit code for runtime failures.
pub const EXIT_RUNTIME: i32 = 1;

/// A CLI failure with its exit code class. Messages are single-line and
/// machine-parsable (`error: <reason>` on stderr).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub exit_code: i32,
    message: String,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        Self {
            exit_code: EXIT_USAGE,
            message,
        }
    }

    pub fn runtime(message: String) -> Self {
        Self {
            exit_code: EXIT_RUNTIME,
            message,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<cheshire::Error> for CliError {
    fn from(e: cheshire::Error) -> Self {
        CliError::runtime(e.to_string())
    }
}
