//! Experiment driver: reads a TOML configuration, runs bounds, simulations
//! or inequality checks from `pmelab-core`, and writes reports.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;

pub use config::{ExperimentConfig, Mode};
pub use error::{CliError, CliResult};
pub use experiment::{run_experiment, run_in_dir, Outcome, EXIT_ERROR, EXIT_OK, EXIT_VIOLATED};
