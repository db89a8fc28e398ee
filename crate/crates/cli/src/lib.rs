//! Command-line front end for the `drbem` solver: configuration parsing,
//! the `solve`, `reproduce` and `check` commands, and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

pub use commands::{cmd_check, cmd_reproduce, cmd_solve, ReproduceSummary, SolveSummary};
pub use config::{parse_config, ConfigError, Equation, Resolution, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("invalid run: {0}")]
    Invalid(drbem::Error),
    #[error("solver failed: {0}")]
    Solver(drbem::Error),
    #[error("{failed} of {total} {what} failed")]
    PartialFailure {
        what: &'static str,
        failed: usize,
        total: usize,
    },
    #[error("cannot write or read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl From<drbem::Error> for CliError {
    fn from(e: drbem::Error) -> Self {
        if e.is_solver_failure() {
            Self::Solver(e)
        } else {
            Self::Invalid(e)
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Config(_) | Self::Invalid(_) => EXIT_USAGE,
            Self::Solver(_) | Self::PartialFailure { .. } => EXIT_SOLVER,
            Self::Io { .. } => EXIT_IO,
        }
    }
}
