//! Sparse constraint preserving matching.
//!
//! Maximizes `vec(X)ᵀ W vec(X)` subject to
//! `Σᵢ ‖X_{i·}‖₁² + Σⱼ ‖X_{·j}‖₁² = 1`, `X ≥ 0`, with the multiplicative update
//!
//! ```text
//! X'ᵢⱼ = Xᵢⱼ · sqrt( Mᵢⱼ / (α · (rᵢ + cⱼ)) )
//! ```
//!
//! where `vec(M) = W vec(X)`, `α = vec(X)ᵀ W vec(X)`, and `rᵢ`, `cⱼ` are the
//! row and column sums of `X`. All quantities are read from the current
//! iterate. At a fixed point with `α > 0` the constraint holds exactly and
//! `Xᵢⱼ (Mᵢⱼ − α(rᵢ + cⱼ)) = 0` for every entry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ops, AssignmentMatrix, InitMode, Method, SolveReport, SolverConfig};
use crate::{vec_index, AffinityMatrix, Error, Result};

/// Initial iterate. Constant modes use `c = (2n³)^(−1/2)`, which puts the
/// matrix exactly on the constraint surface.
pub fn init_solution(n: usize, mode: &InitMode) -> Result<AssignmentMatrix> {
    if n == 0 {
        return Err(Error::InvalidAssignment("n must be positive".into()));
    }
    let c = (2.0 * (n as f64).powi(3)).sqrt().recip();
    match mode {
        InitMode::UniformFeasible => AssignmentMatrix::filled(n, c),
        InitMode::UniformPerturbed { seed, magnitude } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let m = *magnitude;
            AssignmentMatrix::new(
                n,
                (0..n * n)
                    .map(|_| c * (1.0 + rng.random_range(-m..=m)))
                    .collect(),
            )
        }
        InitMode::Given(x) => {
            if x.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: x.n(),
                });
            }
            Ok(x.clone())
        }
    }
}

fn check_dims(w: &AffinityMatrix, x: &AssignmentMatrix) -> Result<()> {
    if w.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            found: x.n(),
        });
    }
    Ok(())
}

/// `M` with `vec(M) = W vec(X)`.
pub fn affinity_apply(w: &AffinityMatrix, x: &AssignmentMatrix) -> Result<AssignmentMatrix> {
    check_dims(w, x)?;
    let mut m = vec![0.0; x.as_vec().len()];
    w.apply_into(x.as_vec(), &mut m);
    Ok(AssignmentMatrix::from_raw(x.n(), m))
}

/// `α = vec(X)ᵀ W vec(X)`.
pub fn compute_alpha(w: &AffinityMatrix, x: &AssignmentMatrix) -> Result<f64> {
    check_dims(w, x)?;
    Ok(w.quadratic_form(x.as_vec()))
}

/// `Σᵢ ‖X_{i·}‖₁² + Σⱼ ‖X_{·j}‖₁²`, equal to `𝟙ᵀ(XᵀX + XXᵀ)𝟙` for `X ≥ 0`.
pub fn constraint_value(x: &AssignmentMatrix) -> f64 {
    sum_of_squares(&x.row_sums()) + sum_of_squares(&x.col_sums())
}

fn sum_of_squares(v: &[f64]) -> f64 {
    v.iter().map(|s| s * s).sum()
}

/// `𝓛(X) = vec(X)ᵀ W vec(X) − α (constraint_value(X) − 1)`.
pub fn lagrangian(x: &AssignmentMatrix, w: &AffinityMatrix, alpha: f64) -> Result<f64> {
    Ok(compute_alpha(w, x)? - alpha * (constraint_value(x) - 1.0))
}

/// Complementary-slackness residual of the update's fixed-point condition:
/// `maxᵢⱼ |Xᵢⱼ (Mᵢⱼ − α (rᵢ + cⱼ))| / max(1, α)`.
pub fn kkt_residual(x: &AssignmentMatrix, w: &AffinityMatrix) -> Result<f64> {
    check_dims(w, x)?;
    let eval = Evaluation::new(w, x);
    if eval.alpha <= 0.0 {
        return Err(Error::DegenerateObjective);
    }
    Ok(eval.kkt_residual(x))
}

/// Everything one update needs from the current iterate.
struct Evaluation {
    m: Vec<f64>,
    alpha: f64,
    rows: Vec<f64>,
    cols: Vec<f64>,
}

impl Evaluation {
    fn new(w: &AffinityMatrix, x: &AssignmentMatrix) -> Self {
        let mut m = vec![0.0; x.as_vec().len()];
        w.apply_into(x.as_vec(), &mut m);
        let alpha = x.as_vec().iter().zip(&m).map(|(a, b)| a * b).sum();
        Self {
            m,
            alpha,
            rows: x.row_sums(),
            cols: x.col_sums(),
        }
    }

    fn constraint_value(&self) -> f64 {
        sum_of_squares(&self.rows) + sum_of_squares(&self.cols)
    }

    fn lagrangian(&self) -> f64 {
        self.alpha - self.alpha * (self.constraint_value() - 1.0)
    }

    fn kkt_residual(&self, x: &AssignmentMatrix) -> f64 {
        let n = x.n();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let p = vec_index(n, i, j);
                let r = x.as_vec()[p] * (self.m[p] - self.alpha * (self.rows[i] + self.cols[j]));
                worst = worst.max(r.abs());
            }
        }
        worst / self.alpha.max(1.0)
    }

    fn update(&self, x: &AssignmentMatrix, eps_guard: f64) -> Result<AssignmentMatrix> {
        let n = x.n();
        let mut next = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                let p = vec_index(n, i, j);
                let xij = x.as_vec()[p];
                if xij == 0.0 {
                    continue;
                }
                let denom = (self.alpha * (self.rows[i] + self.cols[j])).max(eps_guard);
                let v = xij * (self.m[p] / denom).sqrt();
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntry);
                }
                next[p] = v;
            }
        }
        ops::record((n * n) as u64);
        Ok(AssignmentMatrix::from_raw(n, next))
    }
}

/// One multiplicative update. Returns the new iterate and the `α` of the old one.
pub fn spm_step(
    x: &AssignmentMatrix,
    w: &AffinityMatrix,
    eps_guard: f64,
) -> Result<(AssignmentMatrix, f64)> {
    check_dims(w, x)?;
    let eval = Evaluation::new(w, x);
    if eval.alpha <= 0.0 {
        return Err(Error::DegenerateObjective);
    }
    Ok((eval.update(x, eps_guard)?, eval.alpha))
}

pub fn spm_solve(w: &AffinityMatrix, cfg: &SolverConfig) -> Result<SolveReport> {
    spm_solve_observed(w, cfg, |_, _| {})
}

/// [`spm_solve`] that hands every iterate `Xᵗ` (including `X⁰`) to `observer`.
pub fn spm_solve_observed(
    w: &AffinityMatrix,
    cfg: &SolverConfig,
    mut observer: impl FnMut(usize, &AssignmentMatrix),
) -> Result<SolveReport> {
    cfg.validate()?;
    let mut x = init_solution(w.n(), &cfg.init)?;
    let mut eval = Evaluation::new(w, &x);
    if eval.alpha <= 0.0 {
        return Err(Error::DegenerateObjective);
    }
    observer(0, &x);

    let mut objective_trace = vec![eval.alpha];
    let mut lagrangian_trace = vec![eval.lagrangian()];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        let next = eval.update(&x, cfg.eps_guard)?;
        let next_eval = Evaluation::new(w, &next);
        if next_eval.alpha <= 0.0 {
            return Err(Error::DegenerateObjective);
        }
        iterations += 1;
        objective_trace.push(next_eval.alpha);
        lagrangian_trace.push(next_eval.lagrangian());
        observer(iterations, &next);

        let done = cfg.has_converged(eval.alpha, next_eval.alpha, next_eval.kkt_residual(&next));
        x = next;
        eval = next_eval;
        if done {
            converged = true;
            break;
        }
    }

    Ok(SolveReport {
        method: Method::Spm,
        constraint_residual: (eval.constraint_value() - 1.0).abs(),
        kkt_residual: eval.kkt_residual(&x),
        final_x: x,
        iterations,
        objective_trace,
        lagrangian_trace,
        converged,
        eigenvalue: None,
    })
}
