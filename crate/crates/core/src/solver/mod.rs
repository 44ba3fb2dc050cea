//! Relaxed solvers for the quadratic matching objective.

mod assignment;
mod baselines;
mod config;
pub mod ops;
mod spm;

pub use assignment::AssignmentMatrix;
pub use baselines::{replicator_solve, spectral_solve};
pub use config::{InitMode, Method, SolveReport, SolverConfig};
pub use spm::{
    affinity_apply, compute_alpha, constraint_value, init_solution, kkt_residual, lagrangian,
    spm_solve, spm_solve_observed, spm_step,
};
