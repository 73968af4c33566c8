//! Command-line driver for `symsq-core`: configuration, JSON reports and the
//! weight 16 reproduction run.

pub mod audit;
pub mod charspec;
pub mod commands;
pub mod config;
pub mod fixtures;
pub mod pipeline;
pub mod report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] symsq_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }

    /// Errors raised while reading user input are usage errors whatever their source.
    pub fn into_usage(self) -> CliError {
        match self {
            CliError::Core(e) => CliError::Usage(e.to_string()),
            e => e,
        }
    }
}
