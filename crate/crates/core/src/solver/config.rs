use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AssignmentMatrix;
use crate::{Error, Result};

/// Starting point of the iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum InitMode {
    /// Constant matrix lying exactly on the SPM constraint surface.
    UniformFeasible,
    /// `UniformFeasible` with each entry scaled by `1 + u`, `u ~ U[−magnitude, magnitude]`.
    UniformPerturbed { seed: u64, magnitude: f64 },
    Given(AssignmentMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Relative objective change below which the iteration may stop.
    pub tol: f64,
    /// Stationarity residual that must also hold before stopping.
    pub kkt_tol: f64,
    /// Floor for the update's denominator.
    pub eps_guard: f64,
    pub init: InitMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            tol: 1e-9,
            kkt_tol: 1e-7,
            eps_guard: 1e-12,
            init: InitMode::UniformFeasible,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        for (name, v) in [
            ("tol", self.tol),
            ("kkt_tol", self.kkt_tol),
            ("eps_guard", self.eps_guard),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if let InitMode::UniformPerturbed { magnitude, .. } = self.init {
            if !(magnitude > 0.0 && magnitude < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "perturbation magnitude must lie in (0, 1), got {magnitude}"
                )));
            }
        }
        Ok(())
    }

    /// Returns `true` once both the objective and the stationarity residual have settled.
    pub(crate) fn has_converged(&self, prev_obj: f64, obj: f64, residual: f64) -> bool {
        (obj - prev_obj).abs() <= self.tol * prev_obj.max(1.0) && residual <= self.kkt_tol
    }
}

/// Relaxation solved by a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Spm,
    Replicator,
    Spectral,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Spm, Method::Replicator, Method::Spectral];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Spm => "spm",
            Method::Replicator => "replicator",
            Method::Spectral => "spectral",
        }
    }

    pub fn solve(&self, w: &crate::AffinityMatrix, cfg: &SolverConfig) -> Result<SolveReport> {
        match self {
            Method::Spm => super::spm_solve(w, cfg),
            Method::Replicator => super::replicator_solve(w, cfg),
            Method::Spectral => super::spectral_solve(w, cfg),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Outcome of a solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub final_x: AssignmentMatrix,
    pub iterations: usize,
    /// `vec(Xᵗ)ᵀ W vec(Xᵗ)` for `t = 0..=iterations`.
    pub objective_trace: Vec<f64>,
    /// Lagrangian of each iterate, with the multiplier set to that iterate's objective.
    pub lagrangian_trace: Vec<f64>,
    /// Distance of the final iterate from the method's constraint surface.
    pub constraint_residual: f64,
    /// Stationarity residual of the final iterate.
    pub kkt_residual: f64,
    pub converged: bool,
    /// Rayleigh quotient, spectral baseline only.
    pub eigenvalue: Option<f64>,
}

impl SolveReport {
    pub fn objective(&self) -> f64 {
        *self.objective_trace.last().expect("trace is never empty")
    }
}
