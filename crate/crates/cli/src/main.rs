//! `qmem`: certify quantum memories with semiquantum signaling games.
//!
//! Exit codes: 0 success (or certified), 2 not certified, 1 error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Maximum accepted channel dimension.
const DEFAULT_MAX_DIM: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "qmem", version, about = "Certify quantum memories with semiquantum signaling games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChannelKind {
    Depolarizing,
    Erasure,
    MeasurePrepare,
    Identity,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Standard,
    Tetrahedral,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Sparse,
    Tomographic,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a channel JSON file.
    MakeChannel {
        /// Channel kind (positional form).
        #[arg(value_enum, conflicts_with = "kind_flag")]
        kind: Option<ChannelKind>,
        /// Visibility for depolarizing, transmission for erasure, outcome
        /// count for measure-prepare (positional form).
        #[arg(conflicts_with = "param_flag")]
        param: Option<f64>,
        #[arg(long = "kind", value_enum)]
        kind_flag: Option<ChannelKind>,
        #[arg(long = "param")]
        param_flag: Option<f64>,
        /// Input dimension (depolarizing is qubit only).
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Seed for measure-prepare channels.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the certification pipeline on a channel; the game is written to
    /// `--out`.
    Certify {
        /// Channel JSON; standard input when absent or `-`.
        channel: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Sparse)]
        mode: Mode,
        /// Input family for tomographic mode.
        #[arg(long, value_enum, default_value_t = Family::Standard)]
        family: Family,
        /// Witness JSON replacing the partial-transpose witness.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Game JSON destination.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Payoff margin required for a positive verdict.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: usize,
        /// Add wall-clock time to the report (breaks byte-identical output).
        #[arg(long)]
        timing: bool,
    },
    /// Play a game with a channel's Bell-measurement strategy and write the
    /// correlation CSV.
    Simulate {
        channel: PathBuf,
        game: PathBuf,
        /// Transmission of an erasure applied after the channel.
        #[arg(long)]
        eta: Option<f64>,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: usize,
    },
    /// Decompose a witness into product-state payoff data.
    Decompose {
        witness: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Sparse)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Family::Standard)]
        family: Family,
        /// Decomposition JSON destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Bound on the reconstruction residual.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Reconstruct a Choi state from signature correlation data.
    Tomography {
        correlation: PathBuf,
        /// Scenario or game JSON holding the input families.
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Bound on the fit residual.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Write a signature scenario JSON file.
    MakeScenario {
        #[arg(long, default_value_t = 2)]
        dim_a: usize,
        #[arg(long, default_value_t = 2)]
        dim_b: usize,
        #[arg(long, value_enum, default_value_t = Family::Standard)]
        family: Family,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
