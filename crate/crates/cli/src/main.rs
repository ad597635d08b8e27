//! `abflux` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 numerical failure.

mod commands;
mod config;
mod format;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Worker-pool size for grid evaluations.
pub const WORKERS_ENV: &str = "ABFLUX_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<abflux::Error> for CliError {
    fn from(e: abflux::Error) -> Self {
        if e.is_numerical() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(
    name = "abflux",
    version,
    about = "Semiclassical spectra of power-law potentials with an Aharonov-Bohm flux"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form spectrum over an (n, q, k) grid.
    Spectrum(commands::SpectrumArgs),
    /// Exact versus semiclassical levels of the spherical infinite well.
    CompareWell(commands::CompareWellArgs),
    /// E(n, q) grid at fixed k plus a tendency report.
    Tendency(commands::TendencyArgs),
    /// Numerical versus analytic action integral at one energy.
    VerifyAction(commands::VerifyActionArgs),
    /// Energy from the root of the quantization condition.
    Quantize(commands::QuantizeArgs),
    /// Energy from the shooting eigensolver.
    Shoot(commands::ShootArgs),
    /// Positive zeros of the Bessel function J_order.
    Zeros(commands::ZerosArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PotentialArgs {
    /// Power-law exponent, or `inf` for the infinite well.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
    /// Coupling λ in V = λ r^ν; defaults to -1 for ν < 0 and 1 for ν > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Well radius.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SettingsArgs {
    /// key = value file with tolerances and shooting parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long)]
    pub root_tol: Option<f64>,
    /// Shooting grid step in ln r.
    #[arg(long)]
    pub step: Option<f64>,
    /// Shooting eigenvalue tolerance.
    #[arg(long)]
    pub energy_tol: Option<f64>,
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&w| w >= 1)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "{WORKERS_ENV} must be a positive integer, got '{value}'"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_workers()?;
    match cli.command {
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::CompareWell(a) => commands::compare_well(&a),
        Command::Tendency(a) => commands::tendency(&a),
        Command::VerifyAction(a) => commands::verify_action(&a),
        Command::Quantize(a) => commands::quantize(&a),
        Command::Shoot(a) => commands::shoot(&a),
        Command::Zeros(a) => commands::zeros(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("abflux: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
