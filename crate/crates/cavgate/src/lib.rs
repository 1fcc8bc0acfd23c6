//! Experiments, configuration and result files for the `cavgate` CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

pub mod config;
pub mod experiments;
pub mod output;

pub use config::RunConfig;
pub use output::{write_report, Artifact, Manifest, Report, Verdict};

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(cavgate_core::Error),
    #[error("I/O error at {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<cavgate_core::Error> for CliError {
    fn from(e: cavgate_core::Error) -> Self {
        use cavgate_core::Error as E;
        match e {
            E::NormLeak { .. } | E::NonFinite(_) | E::NotConverged { .. } | E::UndefinedRatio => CliError::Numerical(e),
            other => CliError::Config(other.to_string()),
        }
    }
}
