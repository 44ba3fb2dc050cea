//! Synthetic instances, evaluation metrics, the exact oracle and outlier sweeps.

mod metrics;
mod oracle;
mod sweep;
mod synthetic;

pub use metrics::{
    accuracy, discrete_objective, orthogonality, sparsity, MetricsRow, DEFAULT_SPARSITY_THRESHOLD,
};
pub use oracle::{brute_force_oracle, ORACLE_MAX_N};
pub use sweep::{
    compare_with_oracle, format_summary, instance_seed, mean_accuracy, read_csv, run_method,
    run_sweep, write_csv, MethodOutcome, OracleComparison, SweepConfig, CSV_HEADER,
};
pub use synthetic::{
    gen_synthetic, planted_instance, random_instance, regenerate, PlantedInstance, MAX_ROTATION,
    PLANTED_BACKGROUND,
};
