//! `rigidnet` command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure,
//! 4 unmet precondition.

mod commands;
mod schema;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rigidnet::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::Numerical(_)
                | Error::NonFinite(_)
                | Error::Collision { .. }
                | Error::TooFewPoints { .. } => 3,
                Error::NotIsar { .. }
                | Error::NotLaman
                | Error::NotAngleConnected
                | Error::MissingAngle(_)
                | Error::DegreeTooLow { .. }
                | Error::NoAdjacentAnchors
                | Error::NotLocalizable(_)
                | Error::AssumptionViolated(_)
                | Error::DegenerateConfiguration
                | Error::Disconnected
                | Error::NoPath(..) => 4,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rigidnet",
    version,
    about = "Signed-angle rigidity, localization and formation control"
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, env = "RIGIDNET_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Relative rank threshold.
    #[arg(long, global = true, default_value_t = rigidnet::numerics::DEFAULT_RANK_TOL)]
    pub tolerance: f64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Suppress the summary on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rigidity report for a framework.
    Analyze {
        input: PathBuf,
        /// Verdict over random configurations of the graph instead.
        #[arg(long)]
        generic: bool,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Minimal globally rigid angle index set.
    Gais { input: PathBuf },
    /// Simulate angle-only sensor network localization.
    Localize {
        input: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Simulate formation control.
    Formation {
        input: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Generate a seeded framework.
    Randgen {
        #[arg(value_enum)]
        kind: RandKind,
        n: usize,
    },
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Record every this many steps.
    #[arg(long)]
    pub sample_every: Option<usize>,
    /// Fraction of samples used by the exponential-rate fit.
    #[arg(long, default_value_t = 0.5)]
    pub tail_fraction: f64,
    /// Error time series as CSV.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    /// Final estimator or agent state as JSON.
    #[arg(long)]
    pub out_state: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RandKind {
    Laman,
    RandomIsar,
}

pub struct Output {
    pub data: serde_json::Value,
    pub summary: String,
}

fn emit(cli: &Cli, out: &Output) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(&out.data).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    match &cli.out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    if !cli.quiet && !out.summary.is_empty() {
        eprintln!("{}", out.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli).and_then(|out| emit(&cli, &out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
