use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pmelab_cli::{run_experiment, ExperimentConfig, Mode, EXIT_ERROR};

/// Blow-up bounds, simulations and inequality checks for porous medium
/// equations with nonlocal sources.
#[derive(Debug, Parser)]
#[command(name = "pmelab", version)]
struct Args {
    /// Experiment configuration (TOML).
    config: PathBuf,
    /// Base directory for the timestamped output directory.
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    /// Overrides the configured mode.
    #[arg(long)]
    mode: Option<String>,
    /// Suppresses the summary on stdout.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = ExperimentConfig::load(&args.config).and_then(|mut config| {
        if let Some(m) = &args.mode {
            config.mode = m.parse::<Mode>()?;
            config.validate()?;
        }
        run_experiment(&config, &args.out)
    });
    match result {
        Ok(outcome) => {
            if !args.quiet {
                print!("{}", outcome.report);
                println!("output: {}", outcome.dir.display());
            }
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
