//! `deutsch-slit`: command-line front end for the double-slit Deutsch simulator.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deutsch_slit::OracleFunction;

use crate::config::ExperimentConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "deutsch-slit", version, about)]
pub struct Cli {
    /// TOML experiment configuration; defaults reproduce the tabletop setup.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for every random draw; overrides `seed` in the config.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Output file for the primary artifact (default: stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write the effective configuration as TOML.
    #[arg(long, global = true, value_name = "PATH")]
    pub dump_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the Fourier- or image-plane pattern of one signal state (CSV).
    Pattern(PatternArgs),
    /// Heralded signal state for the configured idler window (JSON).
    Herald,
    /// Simulated four-oracle coincidence table (JSON).
    Table,
    /// Success probability versus detector width (CSV, plus JSON summary).
    Scan(ScanArgs),
    /// Play the single-shot betting game (JSON).
    Game(GameArgs),
    /// Fit visibility and relative phase to a reference/shifted pair (JSON).
    Fit(FitArgs),
    /// Visibility and herald-rate calibrations (JSON).
    Calibrate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Plane {
    Fourier,
    Image,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Oracle applied to |+⟩, as the bit string f(0)f(1).
    #[arg(long, default_value = "00", conflicts_with = "phase")]
    pub oracle: OracleFunction,
    /// Equal superposition whose fringes follow 1 + V cos(θ + PHASE), the
    /// convention `fit` reports, instead of an oracle output.
    #[arg(long, allow_negative_numbers = true)]
    pub phase: Option<f64>,
    #[arg(long, value_enum, default_value = "fourier")]
    pub plane: Plane,
    /// Start from the heralded mixed state instead of the ideal |+⟩.
    #[arg(long)]
    pub heralded: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Where to write the JSON summary (default: stdout when --out is set).
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    /// Number of rounds; overrides `monte_carlo.trials`.
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Pattern CSV of the reference (unshifted) state.
    #[arg(long, value_name = "CSV")]
    pub reference: PathBuf,
    /// Pattern CSV of the phase-shifted state.
    #[arg(long, value_name = "CSV")]
    pub shifted: PathBuf,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            ExperimentConfig::from_toml(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    if let Some(path) = &cli.dump_config {
        std::fs::write(path, cfg.to_toml()?).map_err(|e| CliError::io(path, e))?;
    }
    commands::dispatch(cli, &cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = CliError::Usage(e.kind().to_string());
            let body =
                serde_json::json!({ "error": err.kind(), "message": e.to_string().trim_end() });
            eprintln!("{body}");
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::to_string(&e.report()).expect("report serializes");
            eprintln!("{body}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
