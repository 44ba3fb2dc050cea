use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;

use super::metrics::{accuracy, orthogonality, sparsity, MetricsRow, DEFAULT_SPARSITY_THRESHOLD};
use super::oracle::brute_force_oracle;
use super::synthetic::gen_synthetic;
use crate::{
    hungarian, pad_dummy, AffinityMatrix, GroundTruth, Method, Permutation, Result, SolveReport,
    SolverConfig,
};

/// A method's relaxed result together with its rounded permutation.
#[derive(Debug, Clone)]
pub struct MethodOutcome {
    pub report: SolveReport,
    pub permutation: Permutation,
    /// Discrete objective `vec(P)ᵀ W vec(P)` of the rounded permutation.
    pub objective: f64,
    pub accuracy: Option<f64>,
    pub wall_ms: f64,
}

/// Solves, rounds with [`hungarian`], and scores against `gt` when given.
pub fn run_method(
    method: Method,
    w: &AffinityMatrix,
    cfg: &SolverConfig,
    gt: Option<&GroundTruth>,
) -> Result<MethodOutcome> {
    let start = Instant::now();
    let report = method.solve(w, cfg)?;
    let permutation = hungarian(&report.final_x);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let accuracy = gt.map(|gt| accuracy(&permutation, gt)).transpose()?;
    Ok(MethodOutcome {
        objective: permutation.objective(w),
        report,
        permutation,
        accuracy,
        wall_ms,
    })
}

#[derive(Debug, Clone)]
pub struct OracleComparison {
    pub outcome: MethodOutcome,
    pub oracle_permutation: Permutation,
    pub oracle_objective: f64,
    /// Method objective over oracle objective (1 when both are zero).
    pub ratio: f64,
    pub agree: bool,
}

/// Runs `method` and the brute-force oracle on the same matrix.
pub fn compare_with_oracle(method: Method, w: &AffinityMatrix, cfg: &SolverConfig) -> Result<OracleComparison> {
    let (oracle_permutation, oracle_objective) = brute_force_oracle(w)?;
    let outcome = run_method(method, w, cfg, None)?;
    let ratio = if oracle_objective == 0.0 {
        if outcome.objective == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        outcome.objective / oracle_objective
    };
    Ok(OracleComparison {
        agree: outcome.permutation == oracle_permutation,
        outcome,
        oracle_permutation,
        oracle_objective,
        ratio,
    })
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub methods: Vec<Method>,
    pub outliers: RangeInclusive<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub n_inliers: usize,
    pub noise_sigma: f64,
    pub solver: SolverConfig,
    pub sparsity_threshold: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            outliers: 0..=10,
            trials: 20,
            base_seed: 0,
            n_inliers: 15,
            noise_sigma: 0.02,
            solver: SolverConfig::default(),
            sparsity_threshold: DEFAULT_SPARSITY_THRESHOLD,
        }
    }
}

/// Seed of the instance for a given outlier count and trial.
pub fn instance_seed(base_seed: u64, outliers: usize, trial: usize) -> u64 {
    base_seed
        .wrapping_add((outliers as u64) << 32)
        .wrapping_add(trial as u64)
}

/// Outlier sweep: one synthetic instance per `(outliers, trial)`, every method
/// run on the same affinity matrix. Rows are ordered by
/// `(outliers, trial, method)` regardless of scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<MetricsRow>> {
    let mut methods = cfg.methods.clone();
    methods.sort();
    methods.dedup();

    let cells: Vec<(usize, usize)> = cfg
        .outliers
        .clone()
        .flat_map(|o| (0..cfg.trials).map(move |t| (o, t)))
        .collect();

    let per_cell: Vec<Vec<MetricsRow>> = cells
        .par_iter()
        .map(|&(outliers, trial)| {
            let seed = instance_seed(cfg.base_seed, outliers, trial);
            let inst = pad_dummy(&gen_synthetic(cfg.n_inliers, outliers, cfg.noise_sigma, seed)?);
            let w = inst.affinity()?;
            let gt = inst.ground_truth.as_ref();
            let outcomes = methods
                .iter()
                .map(|&m| run_method(m, &w, &cfg.solver, gt))
                .collect::<Result<Vec<_>>>()?;
            let best = outcomes.iter().map(|o| o.objective).fold(0.0, f64::max);
            Ok(methods
                .iter()
                .zip(outcomes)
                .map(|(&method, o)| MetricsRow {
                    method,
                    outliers,
                    trial,
                    seed,
                    accuracy: o.accuracy.unwrap_or(f64::NAN),
                    objective: o.objective,
                    relative_objective: if best > 0.0 { o.objective / best } else { 1.0 },
                    iterations: o.report.iterations,
                    wall_ms: o.wall_ms,
                    sparsity: sparsity(&o.report.final_x, cfg.sparsity_threshold),
                    orthogonality: orthogonality(&o.report.final_x),
                    converged: o.report.converged,
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    Ok(per_cell.into_iter().flatten().collect())
}

/// Writes rows as CSV with the standard header.
pub fn write_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    if rows.is_empty() {
        writer.write_record(CSV_HEADER)?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub const CSV_HEADER: [&str; 11] = [
    "method",
    "outliers",
    "trial",
    "seed",
    "accuracy",
    "objective",
    "relative_objective",
    "iterations",
    "wall_ms",
    "sparsity",
    "orthogonality",
];

pub fn read_csv<R: Read>(input: R) -> Result<Vec<MetricsRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Into::into))
        .collect()
}

/// Mean accuracy per outlier count and method.
pub fn mean_accuracy(rows: &[MetricsRow]) -> BTreeMap<usize, BTreeMap<Method, f64>> {
    let mut acc: BTreeMap<usize, BTreeMap<Method, (f64, usize)>> = BTreeMap::new();
    for row in rows {
        let slot = acc.entry(row.outliers).or_default().entry(row.method).or_default();
        slot.0 += row.accuracy;
        slot.1 += 1;
    }
    acc.into_iter()
        .map(|(o, per)| (o, per.into_iter().map(|(m, (s, c))| (m, s / c as f64)).collect()))
        .collect()
}

/// Plain-text table of [`mean_accuracy`], one line per outlier count.
pub fn format_summary(rows: &[MetricsRow]) -> String {
    let table = mean_accuracy(rows);
    let mut methods: Vec<Method> = rows.iter().map(|r| r.method).collect();
    methods.sort();
    methods.dedup();

    let mut out = format!("{:>8}", "outliers");
    for m in &methods {
        out.push_str(&format!(" {:>11}", m.name()));
    }
    out.push('\n');
    for (outliers, per) in &table {
        out.push_str(&format!("{outliers:>8}"));
        for m in &methods {
            out.push_str(&format!(" {:>11.4}", per.get(m).copied().unwrap_or(f64::NAN)));
        }
        out.push('\n');
    }
    out
}
