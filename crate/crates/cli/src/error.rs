use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// The config file is not valid TOML or does not match the schema.
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Config(String),
    /// A bound mode was requested for parameters no bound covers.
    #[error("no bound covers these parameters; violated hypotheses: {0}")]
    NotCovered(String),
    #[error(transparent)]
    Core(#[from] pmelab_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}
