//! `bandsim`: sample lattice knots, recombine them, aggregate transition
//! networks, identify conformations and check banding obstructions.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Parse(#[from] bandsim::error::ParseError),
    #[error(transparent)]
    Lattice(#[from] bandsim::lattice::LatticeError),
    #[error(transparent)]
    Reconnection(#[from] bandsim::reconnection::ReconnectionError),
    #[error(transparent)]
    Table(#[from] bandsim::knot_table::TableError),
    #[error(transparent)]
    Obstruction(#[from] bandsim::obstructions::ObstructionError),
    #[error(transparent)]
    Stats(#[from] bandsim::stats::StatsError),
    #[error("unknown knot {0}")]
    UnknownKnot(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Io(..) => "io",
            CliError::Parse(_) => "parse",
            CliError::Lattice(_) => "lattice",
            CliError::Reconnection(_) => "reconnection",
            CliError::Table(_) => "table",
            CliError::Obstruction(_) => "obstruction",
            CliError::Stats(_) => "stats",
            CliError::UnknownKnot(_) => "unknown_knot",
        }
    }
}

#[derive(Parser)]
#[command(name = "bandsim", version, about)]
struct Cli {
    /// key=value file supplying any of the subcommand's flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Composite Markov chain settings shared by `sample` and `recombine`.
#[derive(Args, Debug, Default)]
pub struct ChainArgs {
    /// Comma-separated fugacities, lowest first.
    #[arg(long)]
    fugacities: Option<String>,
    #[arg(long)]
    swap_interval: Option<u64>,
    #[arg(long)]
    sample_interval: Option<u64>,
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long)]
    max_length: Option<usize>,
    #[arg(long)]
    rng_seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit lattice conformations of a knot type.
    Sample {
        #[arg(long)]
        knot: Option<String>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Sample conformations, reconnect at a random site and log the products.
    Recombine {
        #[arg(long)]
        knot: Option<String>,
        /// Number of reconnection events to log.
        #[arg(long)]
        events: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reconnect at antiparallel sites instead of parallel ones.
        #[arg(long)]
        coherent: bool,
        /// Identification threads; output does not depend on it.
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Aggregate an event log into a transition network (CSV and JSON).
    Network {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output prefix; writes PREFIX.csv and PREFIX.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        substrate: Option<String>,
        #[arg(long)]
        batches: Option<usize>,
        #[arg(long)]
        confidence: Option<f64>,
    },
    /// Name the knot type of every conformation in a polygon file.
    Identify {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every banding obstruction on a pair of knots (or a knot and a
    /// T(2,n) link with --coherent).
    Obstruct {
        k: String,
        k_prime: String,
        #[arg(long)]
        coherent: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute every stored invariant of a knot table.
    ValidateTable {
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        pd: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config::ConfigFile::load(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Sample { knot, samples, out, chain } => commands::sample(&cfg, knot, samples, out, &chain),
        Cmd::Recombine { knot, events, out, coherent, workers, chain } => {
            commands::recombine(&cfg, knot, events, out, coherent, workers, &chain)
        }
        Cmd::Network { input, out, substrate, batches, confidence } => {
            commands::network(&cfg, input, out, substrate, batches, confidence)
        }
        Cmd::Identify { input, out } => commands::identify(&cfg, input, out),
        Cmd::Obstruct { k, k_prime, coherent, out } => commands::obstruct(&cfg, &k, &k_prime, coherent, out),
        Cmd::ValidateTable { table, pd } => commands::validate_table(&cfg, table, pd),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return report(&CliError::Usage(e.to_string().trim().to_string())),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    let body = json!({ "error": e.kind(), "message": e.to_string() });
    eprintln!("{body}");
    ExitCode::FAILURE
}
