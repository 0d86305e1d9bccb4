//! File formats, run configuration and command implementations for the
//! `peakeq` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod parallel;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] peakeq_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("malformed csv at line {line}: {detail}")]
    Csv { line: usize, detail: String },

    #[error("written trajectory fails the recurrence check (residual {0:e})")]
    Residual(f64),
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Residual(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
