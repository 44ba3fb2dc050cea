//! `spm`: solve matching instances, run outlier sweeps, and check small
//! instances against the brute-force optimum.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 finished without
//! converging (the result is still written).

mod commands;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spm_core::Method;

use commands::Status;

#[derive(Debug, Parser)]
#[command(name = "spm", version, about = "Graph matching with the sparse constraint preserving relaxation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance file and write the result document as JSON.
    Solve(SolveArgs),
    /// Run the synthetic outlier sweep and print mean accuracy per outlier count.
    Sweep(SweepArgs),
    /// Compare a method with the exhaustive optimum on an instance of at most 8 nodes.
    OracleCheck(SolveArgs),
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Iteration cap.
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Relative objective change tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Result file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "spm", value_parser = parse_method)]
    method: Method,
    #[command(flatten)]
    solver: SolverArgs,
    /// Start from a 1% random perturbation of the uniform point drawn with this seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Destination of the per-run table.
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Methods to compare, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "spm,replicator,spectral", value_parser = parse_method)]
    method: Vec<Method>,
    /// Inclusive outlier range, `A..B`.
    #[arg(long, default_value = "0..10", value_parser = parse_range)]
    outliers: RangeInclusive<usize>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Base seed of the instance generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 15)]
    inliers: usize,
    /// Standard deviation of the positional noise.
    #[arg(long, default_value_t = 0.02)]
    noise: f64,
    #[command(flatten)]
    solver: SolverArgs,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: spm_core::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bound = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("expected A..B with nonnegative integers, got `{s}`"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (bound(a)?, bound(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = bound(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };

    let outcome = match &cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::OracleCheck(args) => commands::oracle_check(args),
    };
    match outcome {
        Ok(Status::Converged) => ExitCode::SUCCESS,
        Ok(Status::NotConverged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
