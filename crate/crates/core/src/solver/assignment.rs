use crate::{vec_index, Error, Result};

/// Dense nonnegative `n × n` matrix, stored column-major so that the backing
/// slice is exactly `vec(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentMatrix {
    n: usize,
    values: Vec<f64>,
}

impl AssignmentMatrix {
    /// Wraps a column-major value vector.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAssignment("n must be positive".into()));
        }
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: values.len(),
            });
        }
        if let Some(p) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidAssignment(format!(
                "entry {p} is {} (entries must be finite and nonnegative)",
                values[p]
            )));
        }
        Ok(Self { n, values })
    }

    /// Builds from row-major nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                values[vec_index(n, i, j)] = f(i, j);
            }
        }
        Self::new(n, values)
    }

    pub fn filled(n: usize, value: f64) -> Result<Self> {
        Self::new(n, vec![value; n * n])
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::filled(n, 0.0)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub(crate) fn from_raw(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), n * n);
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[vec_index(self.n, i, j)]
    }

    /// `vec(X)`.
    pub fn as_vec(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    /// Row-major nested copy, for display and serialization.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for chunk in self.values.chunks_exact(self.n) {
            for (s, v) in sums.iter_mut().zip(chunk) {
                *s += v;
            }
        }
        sums
    }

    pub fn col_sums(&self) -> Vec<f64> {
        self.values
            .chunks_exact(self.n)
            .map(|c| c.iter().sum())
            .collect()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_entry(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Position of the largest entry; ties go to the smallest `(i, j)` in row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) > self.get(best.0, best.1) {
                    best = (i, j);
                }
            }
        }
        best
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.n, self.values.iter().map(|v| v * s).collect())
    }

    /// `X Xᵀ`, row-major `n × n`.
    pub fn gram_rows(&self) -> Vec<f64> {
        let n = self.n;
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for k in i..n {
                let dot: f64 = (0..n).map(|j| self.get(i, j) * self.get(k, j)).sum();
                g[i * n + k] = dot;
                g[k * n + i] = dot;
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_major_layout() {
        let x = AssignmentMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(x.as_vec(), &[1.0, 3.0, 2.0, 4.0]);
        assert_eq!(x.row_sums(), vec![3.0, 7.0]);
        assert_eq!(x.col_sums(), vec![4.0, 6.0]);
        assert_eq!(x.to_rows(), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(x.argmax(), (1, 1));
    }

    #[test]
    fn rejects_invalid_entries() {
        assert!(AssignmentMatrix::new(0, vec![]).is_err());
        assert!(AssignmentMatrix::new(2, vec![0.0; 3]).is_err());
        assert!(AssignmentMatrix::new(1, vec![-0.1]).is_err());
        assert!(AssignmentMatrix::new(1, vec![f64::NAN]).is_err());
        assert!(AssignmentMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn gram_of_permutation_is_identity() {
        let x = AssignmentMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(x.gram_rows(), vec![1.0, 0.0, 0.0, 1.0]);
    }
}
