//! Configuration, orchestration and artifact output for `egma` runs.
//!
//! Exit codes of the `egma` binary: 0 converged, 1 configuration or usage
//! error (nothing written), 2 iteration budget exhausted, 3 diverged,
//! 4 gradient check failed.

use std::path::{Path as FsPath, PathBuf};

use thiserror::Error;

pub mod artifacts;
pub mod config;
pub mod gradcheck;
pub mod oracle;
pub mod presets;
pub mod record;
pub mod run;
pub mod sweep;
pub mod table1;

pub use config::RunConfig;
pub use record::RunRecord;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config field `{0}`: {1}")]
    Field(String, String),
    #[error("{0}: {1}")]
    Io(PathBuf, String),
    #[error("{0}, row {1}: {2}")]
    Waypoints(PathBuf, usize, String),
}

impl ConfigError {
    pub fn field(name: &str, msg: impl ToString) -> ConfigError {
        ConfigError::Field(name.to_string(), msg.to_string())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] egma::Error),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn io(file: &FsPath, e: std::io::Error) -> CliError {
        CliError::Io(file.to_path_buf(), e)
    }

    pub fn exit_code(&self) -> i32 {
        1
    }
}
