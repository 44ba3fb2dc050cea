//! Reference relaxations: replicator dynamics on the `ℓ₁` simplex and
//! power iteration for the principal eigenvector of `W`.

use super::{init_solution, AssignmentMatrix, InitMode, Method, SolveReport, SolverConfig};
use crate::{AffinityMatrix, Error, Result};

fn starting_point(w: &AffinityMatrix, cfg: &SolverConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let x = match &cfg.init {
        InitMode::UniformFeasible => AssignmentMatrix::filled(w.n(), 1.0)?,
        mode => init_solution(w.n(), mode)?,
    };
    Ok(x.into_vec())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Replicator dynamics for `max vec(X)ᵀ W vec(X)` over `‖X‖₁ = 1, X ≥ 0`:
/// `X ← X ∘ M / α`, renormalized onto the simplex.
pub fn replicator_solve(w: &AffinityMatrix, cfg: &SolverConfig) -> Result<SolveReport> {
    let mut x = starting_point(w, cfg)?;
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidAssignment("initial point must have positive mass".into()));
    }
    x.iter_mut().for_each(|v| *v /= total);

    let mut m = vec![0.0; x.len()];
    let evaluate = |x: &[f64], m: &mut [f64]| -> Result<(f64, f64)> {
        w.apply_into(x, m);
        let alpha = dot(x, m);
        if alpha <= 0.0 {
            return Err(Error::DegenerateObjective);
        }
        let residual = x
            .iter()
            .zip(m.iter())
            .map(|(xi, mi)| (xi * (mi - alpha)).abs())
            .fold(0.0, f64::max)
            / alpha.max(1.0);
        Ok((alpha, residual))
    };

    let (mut alpha, mut residual) = evaluate(&x, &mut m)?;
    let mut objective_trace = vec![alpha];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        let mut next: Vec<f64> = x.iter().zip(&m).map(|(xi, mi)| xi * mi / alpha).collect();
        let mass: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= mass);
        let (next_alpha, next_residual) = evaluate(&next, &mut m)?;
        iterations += 1;
        objective_trace.push(next_alpha);

        let done = cfg.has_converged(alpha, next_alpha, next_residual);
        x = next;
        alpha = next_alpha;
        residual = next_residual;
        if done {
            converged = true;
            break;
        }
    }

    let mass: f64 = x.iter().sum();
    Ok(SolveReport {
        method: Method::Replicator,
        final_x: AssignmentMatrix::new(w.n(), x)?,
        iterations,
        // iterates stay on the simplex, so the penalty term vanishes
        lagrangian_trace: objective_trace.clone(),
        objective_trace,
        constraint_residual: (mass - 1.0).abs(),
        kkt_residual: residual,
        converged,
        eigenvalue: None,
    })
}

/// Power iteration `v ← W v / ‖W v‖₂` from a positive start.
///
/// `final_x` is the unit-norm eigenvector estimate reshaped to `n × n`;
/// `kkt_residual` is `‖W v − λ v‖₂` with `λ = vᵀ W v`.
/// When `−ρ(W)` is also an eigenvalue (bipartite `W`) the iterate alternates
/// between two vectors and the run ends unconverged at `max_iters`.
pub fn spectral_solve(w: &AffinityMatrix, cfg: &SolverConfig) -> Result<SolveReport> {
    let mut v = starting_point(w, cfg)?;
    let norm = norm2(&v);
    if norm <= 0.0 {
        return Err(Error::InvalidAssignment("initial point must be non-zero".into()));
    }
    v.iter_mut().for_each(|x| *x /= norm);

    let mut y = vec![0.0; v.len()];
    let evaluate = |v: &[f64], y: &mut [f64]| -> (f64, f64) {
        w.apply_into(v, y);
        let lambda = dot(v, y);
        let residual = y
            .iter()
            .zip(v)
            .map(|(yi, vi)| (yi - lambda * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        (lambda, residual)
    };

    let (mut lambda, mut residual) = evaluate(&v, &mut y);
    let mut objective_trace = vec![lambda];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        let norm = norm2(&y);
        if norm <= 0.0 {
            return Err(Error::DegenerateObjective);
        }
        let next: Vec<f64> = y.iter().map(|x| x / norm).collect();
        let (next_lambda, next_residual) = evaluate(&next, &mut y);
        iterations += 1;
        objective_trace.push(next_lambda);

        let done = cfg.has_converged(lambda, next_lambda, next_residual);
        v = next;
        lambda = next_lambda;
        residual = next_residual;
        if done {
            converged = true;
            break;
        }
    }
    if lambda <= 0.0 {
        return Err(Error::DegenerateObjective);
    }

    Ok(SolveReport {
        method: Method::Spectral,
        constraint_residual: (norm2(&v) - 1.0).abs(),
        final_x: AssignmentMatrix::new(w.n(), v)?,
        iterations,
        lagrangian_trace: objective_trace.clone(),
        objective_trace,
        kkt_residual: residual,
        converged,
        eigenvalue: Some(lambda),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_planted3() -> AffinityMatrix {
        // consistent pairs of the identity on a triangle, plus weaker cross terms
        let mut b = AffinityMatrix::builder(3);
        for (i, k) in [(0, 1), (0, 2), (1, 2)] {
            b.set_pair((i, i), (k, k), 1.0).unwrap();
            b.set_pair((i, k), (k, i), 0.3).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn replicator_single_point_simplex() {
        let mut b = AffinityMatrix::builder(1);
        b.set(0, 0, 2.0).unwrap();
        let r = replicator_solve(&b.build().unwrap(), &SolverConfig::default()).unwrap();
        assert_eq!(r.final_x.as_vec(), &[1.0]);
        assert!(r.converged);
    }

    #[test]
    fn replicator_stays_on_simplex_and_ascends() {
        let w = complete_planted3();
        let cfg = SolverConfig {
            max_iters: 200,
            ..SolverConfig::default()
        };
        let r = replicator_solve(&w, &cfg).unwrap();
        assert!(r.constraint_residual < 1e-12);
        for pair in r.objective_trace.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-12);
        }
        let perm = crate::hungarian(&r.final_x);
        assert_eq!(perm.map(), &[0, 1, 2]);
    }

    #[test]
    fn replicator_degenerate() {
        let zero = AffinityMatrix::zeros(2).unwrap();
        assert!(matches!(
            replicator_solve(&zero, &SolverConfig::default()),
            Err(Error::DegenerateObjective)
        ));
    }

    #[test]
    fn spectral_identity_keeps_any_unit_vector() {
        let mut b = AffinityMatrix::builder(2);
        for p in 0..4 {
            b.set(p, p, 1.0).unwrap();
        }
        let r = spectral_solve(&b.build().unwrap(), &SolverConfig::default()).unwrap();
        assert!((r.eigenvalue.unwrap() - 1.0).abs() < 1e-15);
        assert!(r.final_x.as_vec().iter().all(|&v| (v - 0.5).abs() < 1e-15));
        assert!(r.converged);
    }

    #[test]
    fn spectral_rank_one_in_one_step() {
        let wv = [0.5, 1.0, 0.0, 2.0];
        let mut b = AffinityMatrix::builder(2);
        for p in 0..4 {
            for q in p..4 {
                b.set(p, q, wv[p] * wv[q]).unwrap();
            }
        }
        let w = b.build().unwrap();
        let cfg = SolverConfig {
            max_iters: 1,
            ..SolverConfig::default()
        };
        let r = spectral_solve(&w, &cfg).unwrap();
        let norm = wv.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (got, want) in r.final_x.as_vec().iter().zip(wv) {
            assert!((got - want / norm).abs() < 1e-15);
        }
        assert!((r.eigenvalue.unwrap() - norm * norm).abs() < 1e-12);
        assert!(r.kkt_residual < 1e-12);
    }

    #[test]
    fn spectral_degenerate() {
        let zero = AffinityMatrix::zeros(2).unwrap();
        assert!(matches!(
            spectral_solve(&zero, &SolverConfig::default()),
            Err(Error::DegenerateObjective)
        ));
    }
}
