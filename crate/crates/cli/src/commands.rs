use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use spm_core::bench::{
    compare_with_oracle, format_summary, run_method, run_sweep, write_csv, SweepConfig,
};
use spm_core::{pad_dummy, InitMode, MatchInstance, Method, SolverConfig};
use thiserror::Error;

use crate::{Format, SolveArgs, SolverArgs, SweepArgs};

const SEEDED_INIT_MAGNITUDE: f64 = 0.01;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] spm_core::Error),
    #[error("input file {0} does not exist")]
    MissingInput(PathBuf),
    #[error("output directory {0} does not exist")]
    MissingOutputDir(PathBuf),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    NotConverged,
}

impl Status {
    fn from_converged(converged: bool) -> Self {
        if converged {
            Status::Converged
        } else {
            Status::NotConverged
        }
    }
}

/// Result document of `spm solve`.
#[derive(Debug, Serialize)]
struct SolveResult {
    method: Method,
    /// Model node `i` is assigned data node `permutation[i]`, dummies included.
    permutation: Vec<usize>,
    /// `[model, data]` pairs between real (non-dummy) nodes.
    matches: Vec<[usize; 2]>,
    accuracy: Option<f64>,
    objective: f64,
    constraint_residual: f64,
    kkt_residual: f64,
    iterations: usize,
    converged: bool,
    wall_ms: f64,
}

#[derive(Debug, Serialize)]
struct OracleResult {
    method: Method,
    permutation: Vec<usize>,
    objective: f64,
    oracle_permutation: Vec<usize>,
    oracle_objective: f64,
    ratio: f64,
    agree: bool,
    converged: bool,
}

fn check_input(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::MissingInput(path.to_path_buf()))
    }
}

fn check_output(path: Option<&Path>) -> Result<(), CliError> {
    match path.and_then(Path::parent) {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(CliError::MissingOutputDir(dir.to_path_buf()))
        }
        _ => Ok(()),
    }
}

fn solver_config(args: &SolverArgs, seed: Option<u64>) -> Result<SolverConfig, CliError> {
    let cfg = SolverConfig {
        max_iters: args.max_iters,
        tol: args.tol,
        init: match seed {
            Some(seed) => InitMode::UniformPerturbed {
                seed,
                magnitude: SEEDED_INIT_MAGNITUDE,
            },
            None => InitMode::UniformFeasible,
        },
        ..SolverConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn io_error(path: Option<&Path>) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Write {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    }
}

/// Runs `write` against `path`, or standard output when `path` is `None`.
fn write_output(
    path: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let mut out: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_error(path))?)),
        None => Box::new(io::stdout().lock()),
    };
    write(&mut out)?;
    out.flush().map_err(io_error(path))
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    write_output(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value)?;
        writeln!(out).map_err(io_error(path))
    })
}

fn load(path: &Path) -> Result<MatchInstance, CliError> {
    check_input(path)?;
    Ok(pad_dummy(&MatchInstance::from_path(path)?))
}

pub fn solve(args: &SolveArgs) -> Result<Status, CliError> {
    check_output(args.output.as_deref())?;
    let cfg = solver_config(&args.solver, args.seed)?;
    let inst = load(&args.input)?;
    let w = inst.affinity()?;
    let out = run_method(args.method, &w, &cfg, inst.ground_truth.as_ref())?;

    let (model, data) = (inst.model.len(), inst.data.len());
    let permutation = out.permutation.map().to_vec();
    let matches = permutation
        .iter()
        .enumerate()
        .filter(|&(i, &j)| i < model && j < data)
        .map(|(i, &j)| [i, j])
        .collect();
    let doc = SolveResult {
        method: args.method,
        permutation,
        matches,
        accuracy: out.accuracy,
        objective: out.objective,
        constraint_residual: out.report.constraint_residual,
        kkt_residual: out.report.kkt_residual,
        iterations: out.report.iterations,
        converged: out.report.converged,
        wall_ms: out.wall_ms,
    };
    write_json(args.output.as_deref(), &doc)?;
    Ok(Status::from_converged(doc.converged))
}

pub fn sweep(args: &SweepArgs) -> Result<Status, CliError> {
    check_output(Some(&args.output))?;
    let cfg = SweepConfig {
        methods: args.method.clone(),
        outliers: args.outliers.clone(),
        trials: args.trials,
        base_seed: args.seed,
        n_inliers: args.inliers,
        noise_sigma: args.noise,
        solver: solver_config(&args.solver, None)?,
        ..SweepConfig::default()
    };
    let rows = run_sweep(&cfg)?;
    match args.format {
        Format::Csv => write_output(Some(&args.output), |out| Ok(write_csv(&rows, out)?))?,
        Format::Json => write_json(Some(&args.output), &rows)?,
    }

    let unconverged = rows.iter().filter(|r| !r.converged).count();
    if unconverged > 0 {
        log::info!("{unconverged} of {} runs stopped at the iteration cap", rows.len());
    }
    print!("{}", format_summary(&rows));
    Ok(Status::Converged)
}

pub fn oracle_check(args: &SolveArgs) -> Result<Status, CliError> {
    check_output(args.output.as_deref())?;
    let cfg = solver_config(&args.solver, args.seed)?;
    let inst = load(&args.input)?;
    let w = inst.affinity()?;
    let cmp = compare_with_oracle(args.method, &w, &cfg)?;

    println!("method {}", args.method);
    println!("objective {}", cmp.outcome.objective);
    println!("oracle objective {}", cmp.oracle_objective);
    println!("ratio {}", cmp.ratio);
    println!("agree {}", cmp.agree);
    if let Some(path) = args.output.as_deref() {
        let doc = OracleResult {
            method: args.method,
            permutation: cmp.outcome.permutation.map().to_vec(),
            objective: cmp.outcome.objective,
            oracle_permutation: cmp.oracle_permutation.map().to_vec(),
            oracle_objective: cmp.oracle_objective,
            ratio: cmp.ratio,
            agree: cmp.agree,
            converged: cmp.outcome.report.converged,
        };
        write_json(Some(path), &doc)?;
    }
    Ok(Status::Converged)
}
