//! Command-line front end for the free-particle wavepacket
//! laboratory.
//!
//! Exit codes: 0 success, 2 malformed configuration or flags, 3 invariant
//! violation (bad grid, unsupported mode order, ...), 4 oracle threshold
//! failure, 1 I/O trouble.

mod commands;
mod config;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::CommonFlags;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Invariant(String),
    Threshold(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Threshold(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration: {msg}"),
            CliError::Invariant(msg) => write!(f, "invariant violation: {msg}"),
            CliError::Threshold(msg) => write!(f, "check failed: {msg}"),
            CliError::Io(msg) => write!(f, "i/o: {msg}"),
        }
    }
}

/// Free-particle Hermite-Gauss and Laguerre-Gauss wavepacket laboratory.
#[derive(Parser)]
#[command(name = "wavepacket", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print psi at one point as `re im modulus phase`.
    Eval {
        #[command(flatten)]
        flags: CommonFlags,
        /// Evaluation abscissa.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        x: f64,
        /// Evaluation ordinate.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        y: f64,
    },
    /// Measured expectation values next to their closed forms, per time.
    Observables {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Compare spectral propagation against the analytic states; nonzero exit
    /// if any relative error exceeds the threshold.
    #[command(name = "propagate-check")]
    PropagateCheck {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Density frames (CSV raster + PGM image) per time.
    Snapshot {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Density section rho(x, y=0, t) over an (x, t) raster.
    Section {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Current streamline polylines (CSV + SVG) per time.
    Streamlines {
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval { flags, x, y } => commands::run_eval(&flags, x, y),
        Command::Observables { flags } => commands::run_observables(&flags),
        Command::PropagateCheck { flags } => commands::run_propagate_check(&flags),
        Command::Snapshot { flags } => commands::run_snapshot(&flags),
        Command::Section { flags } => commands::run_section(&flags),
        Command::Streamlines { flags } => commands::run_streamlines(&flags),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
