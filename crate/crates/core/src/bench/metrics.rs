use serde::{Deserialize, Serialize};

use crate::{AffinityMatrix, AssignmentMatrix, Error, GroundTruth, Method, Permutation, Result};

pub const DEFAULT_SPARSITY_THRESHOLD: f64 = 1e-3;

/// Fraction of labelled model rows whose prediction matches the ground truth.
pub fn accuracy(pred: &Permutation, gt: &GroundTruth) -> Result<f64> {
    if pred.n() != gt.len() {
        return Err(Error::DimensionMismatch {
            expected: gt.len(),
            found: pred.n(),
        });
    }
    let labelled = gt.labelled();
    if labelled == 0 {
        return Err(Error::EmptyGroundTruth);
    }
    let correct = gt
        .rows()
        .iter()
        .zip(pred.map())
        .filter(|(truth, &p)| **truth == Some(p))
        .count();
    Ok(correct as f64 / labelled as f64)
}

/// Number of entries above `threshold · max(X)`.
pub fn sparsity(x: &AssignmentMatrix, threshold: f64) -> usize {
    let cutoff = threshold * x.max_entry();
    if x.max_entry() == 0.0 {
        return 0;
    }
    x.as_vec().iter().filter(|&&v| v > cutoff).count()
}

/// Mean of the off-diagonal entries of `X Xᵀ`; zero for permutation-structured `X`.
pub fn orthogonality(x: &AssignmentMatrix) -> f64 {
    let n = x.n();
    if n < 2 {
        return 0.0;
    }
    let g = x.gram_rows();
    let off: f64 = (0..n)
        .flat_map(|i| (0..n).filter(move |&k| k != i).map(move |k| (i, k)))
        .map(|(i, k)| g[i * n + k])
        .sum();
    off / (n * (n - 1)) as f64
}

/// Discrete IQP objective of a permutation.
pub fn discrete_objective(pred: &Permutation, w: &AffinityMatrix) -> f64 {
    pred.objective(w)
}

/// One method's result on one sweep instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub method: Method,
    pub outliers: usize,
    pub trial: usize,
    pub seed: u64,
    pub accuracy: f64,
    pub objective: f64,
    pub relative_objective: f64,
    pub iterations: usize,
    pub wall_ms: f64,
    pub sparsity: usize,
    pub orthogonality: f64,
    #[serde(skip)]
    pub converged: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_counts_labelled_rows() {
        let gt = GroundTruth::new(vec![Some(0), Some(1), Some(2), Some(3)]).unwrap();
        assert_eq!(accuracy(&Permutation::identity(4), &gt).unwrap(), 1.0);
        let shifted = Permutation::new(vec![1, 2, 3, 0]).unwrap();
        assert_eq!(accuracy(&shifted, &gt).unwrap(), 0.0);
        let half = Permutation::new(vec![0, 1, 3, 2]).unwrap();
        assert_eq!(accuracy(&half, &gt).unwrap(), 0.5);
    }

    #[test]
    fn accuracy_ignores_dont_care_rows() {
        let gt = GroundTruth::new(vec![Some(1), Some(0), Some(2), None, None]).unwrap();
        let pred = Permutation::new(vec![1, 0, 2, 4, 3]).unwrap();
        assert_eq!(accuracy(&pred, &gt).unwrap(), 1.0);
        let pred = Permutation::new(vec![1, 0, 3, 2, 4]).unwrap();
        assert!((accuracy(&pred, &gt).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn accuracy_errors() {
        let gt = GroundTruth::new(vec![None, None]).unwrap();
        assert!(matches!(accuracy(&Permutation::identity(2), &gt), Err(Error::EmptyGroundTruth)));
        assert!(accuracy(&Permutation::identity(3), &gt).is_err());
    }

    #[test]
    fn sparsity_examples() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap().to_matrix();
        assert_eq!(sparsity(&p, DEFAULT_SPARSITY_THRESHOLD), 3);
        let u = AssignmentMatrix::filled(3, 0.2).unwrap();
        assert_eq!(sparsity(&u, DEFAULT_SPARSITY_THRESHOLD), 9);
        assert_eq!(sparsity(&AssignmentMatrix::zeros(2).unwrap(), 1e-3), 0);
    }

    #[test]
    fn orthogonality_examples() {
        let p = Permutation::new(vec![1, 3, 0, 2]).unwrap().to_matrix();
        assert_eq!(orthogonality(&p), 0.0);
        let half = AssignmentMatrix::filled(2, 0.5).unwrap();
        assert_eq!(orthogonality(&half), 0.5);
        assert_eq!(orthogonality(&AssignmentMatrix::filled(1, 3.0).unwrap()), 0.0);
    }
}
