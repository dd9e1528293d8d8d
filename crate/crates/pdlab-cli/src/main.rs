//! `pdlab`: samplers, the density solver, rate evaluators, and the
//! verification experiments behind one seeded, machine-readable front end.
//!
//! Exit codes: 0 success, 2 usage error (unparseable flags or parameter
//! ranges), 1 runtime error (solver failures, ESS gate, io).

mod density;
mod output;
mod rate;
mod sample;
mod select;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "pdlab", version, about = "Poisson-Dirichlet small-mutation laboratory")]
struct Cli {
    /// RNG seed; default comes from PDLAB_SEED, else 42
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker thread count; results never depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; commands with a natural table default to csv,
    /// reports default to json
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Draw sorted frequency vectors from the stick-breaking, subordinator,
    /// or labeled-measure construction
    Sample(sample::SampleArgs),
    /// Solve, dump, load, and query the largest-frequency density table
    Density(density::DensityArgs),
    /// Evaluate a rate function at a point
    Rate(rate::RateArgs),
    /// Run a named verification experiment and report pass/fail
    Verify(verify::VerifyArgs),
    /// Sample the selection-tilted measure and report coexistence classes
    Select(select::SelectArgs),
}

/// Errors split by exit code. Parameter-range problems are usage errors;
/// anything that fails after validation is a runtime error.
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<pdlab_core::Error> for CliError {
    fn from(e: pdlab_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Resolved run-wide settings handed to every subcommand.
pub struct Ctx {
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("PDLAB_SEED") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| usage(format!("PDLAB_SEED must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(42),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx {
        seed: resolve_seed(cli.seed)?,
        threads: cli.threads,
        out: cli.out,
        format: cli.format,
    };
    if let Some(k) = ctx.threads {
        if k == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    match cli.command {
        Command::Sample(a) => sample::run(&ctx, a),
        Command::Density(a) => density::run(&ctx, a),
        Command::Rate(a) => rate::run(&ctx, a),
        Command::Verify(a) => verify::run(&ctx, a),
        Command::Select(a) => select::run(&ctx, a),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        // clap exits 2 on usage errors and 0 for --help/--version
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}
