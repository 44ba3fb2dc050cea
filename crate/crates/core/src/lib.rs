//! Feature correspondence by sparse constraint preserving matching (SPM).
//!
//! The matching problem is posed as an integer quadratic program over
//! permutation matrices: maximize `vec(X)ᵀ W vec(X)` where `W` scores the
//! compatibility of pairs of candidate assignments. SPM relaxes the
//! permutation constraint to
//!
//! ```text
//! Σᵢ ‖X_{i·}‖₁² + Σⱼ ‖X_{·j}‖₁² = 1,   X ≥ 0
//! ```
//!
//! which favours one non-zero per row and column, and solves it with a
//! multiplicative fixed-point update. The crate is split into:
//!
//! - [`affinity`]: point sets, Delaunay / k-NN graphs, edge attributes and the
//!   sparse affinity matrix `W`.
//! - [`solver`]: the SPM update and its diagnostics, plus replicator dynamics
//!   and power iteration baselines.
//! - [`discretize`]: rounding a relaxed solution to a permutation.
//! - [`bench`]: synthetic instances, metrics, a brute-force oracle and
//!   outlier sweeps.
//!
//! Every `n × n` matrix is vectorized column-major, `vec(X) = (X₁₁, X₂₁, …, Xₙₙ)`,
//! so the assignment `(i, j)` lives at position `i + j·n` of `W`'s rows.

pub mod affinity;
pub mod bench;
pub mod discretize;
mod error;
pub mod instance;
pub mod solver;

pub use affinity::{
    build_affinity, build_graph, compute_edge_attrs, delaunay_triangulate, knn_graph, pad_dummy,
    AffinityBuilder, AffinityMatrix, AffinityParams, AttributedGraph, EdgeAttr, GraphKind,
    PointSet,
};
pub use discretize::{greedy_discretize, hungarian, Permutation};
pub use error::{Error, Result};
pub use instance::{GroundTruth, InstanceMeta, MatchInstance};
pub use solver::{
    affinity_apply, compute_alpha, constraint_value, init_solution, kkt_residual, lagrangian,
    replicator_solve, spectral_solve, spm_solve, spm_solve_observed, spm_step, AssignmentMatrix,
    InitMode, Method, SolveReport, SolverConfig,
};

/// Position of assignment `(i, j)` in the column-major vectorization of an `n × n` matrix.
#[inline]
pub fn vec_index(n: usize, i: usize, j: usize) -> usize {
    i + j * n
}

/// Inverse of [`vec_index`].
#[inline]
pub fn unvec_index(n: usize, p: usize) -> (usize, usize) {
    (p % n, p / n)
}
