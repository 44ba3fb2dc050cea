//! Rounding relaxed solutions to permutations.

use std::fmt;

use crate::{AffinityMatrix, AssignmentMatrix, Error, Result};

/// A bijection on `[0, n)`: model node `i` is assigned data node `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty map".into()));
        }
        let mut seen = vec![false; n];
        for (i, &j) in map.iter().enumerate() {
            if j >= n {
                return Err(Error::InvalidPermutation(format!("map[{i}] = {j} out of range")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidPermutation(format!("target {j} used twice")));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    pub fn to_matrix(&self) -> AssignmentMatrix {
        AssignmentMatrix::from_fn(self.n(), |i, j| if self.map[i] == j { 1.0 } else { 0.0 })
            .expect("0/1 entries are valid")
    }

    /// `Σᵢ scores[i, map[i]]`.
    pub fn score(&self, scores: &AssignmentMatrix) -> f64 {
        self.map.iter().enumerate().map(|(i, &j)| scores.get(i, j)).sum()
    }

    /// Quadratic objective `vec(P)ᵀ W vec(P)` of the permutation matrix `P`.
    pub fn objective(&self, w: &AffinityMatrix) -> f64 {
        let n = self.n();
        debug_assert_eq!(w.n(), n);
        let mut total = 0.0;
        for (i, &j) in self.map.iter().enumerate() {
            let (cols, vals) = w.row(crate::vec_index(n, i, j));
            for (&q, &v) in cols.iter().zip(vals) {
                let (k, l) = crate::unvec_index(n, q);
                if self.map[k] == l {
                    total += v;
                }
            }
        }
        total
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.map)
    }
}

/// Minimum-cost assignment on a dense row-major `n × n` cost matrix.
///
/// Shortest augmenting paths with row/column potentials, `O(n³)`. Returns the
/// row-to-column assignment and the dual potentials `(u, v)`, which satisfy
/// `cost[i][j] − u[i] − v[j] ≥ 0` with equality on the assignment.
fn min_cost_assignment(n: usize, cost: &[f64]) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    // row matched to column j (1-based, 0 = free)
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[p[j] - 1] = j - 1;
    }
    (assignment, u[1..].to_vec(), v[1..].to_vec())
}

/// Best total score over `rows × cols` (equal lengths), with the chosen columns.
fn best_sub_assignment(scores: &AssignmentMatrix, rows: &[usize], cols: &[usize]) -> (f64, Vec<usize>) {
    let m = rows.len();
    if m == 0 {
        return (0.0, Vec::new());
    }
    let mut cost = Vec::with_capacity(m * m);
    for &i in rows {
        cost.extend(cols.iter().map(|&j| -scores.get(i, j)));
    }
    let (assign, _, _) = min_cost_assignment(m, &cost);
    let chosen: Vec<usize> = assign.iter().map(|&c| cols[c]).collect();
    let total = rows.iter().zip(&chosen).map(|(&i, &j)| scores.get(i, j)).sum();
    (total, chosen)
}

/// Maximum-score permutation. Among optimal permutations (up to a relative
/// tolerance of 1e−9) the lexicographically smallest map is returned.
pub fn hungarian(scores: &AssignmentMatrix) -> Permutation {
    let n = scores.n();
    let cost: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| -scores.get(i, j))
        .collect();
    let (mut current, u, v) = min_cost_assignment(n, &cost);
    let optimum: f64 = current.iter().enumerate().map(|(i, &j)| scores.get(i, j)).sum();
    let scale: f64 = (0..n)
        .map(|i| (0..n).map(|j| scores.get(i, j)).fold(0.0, f64::max))
        .sum();
    let tol = 1e-9 * scale.max(1.0);

    // Fix rows in order, each to the smallest column that still admits an
    // optimal completion. Complementary slackness against the optimal duals
    // rules out any column with positive reduced cost without a re-solve.
    let mut used = vec![false; n];
    let mut pinned_total = 0.0;
    for i in 0..n {
        for j in 0..current[i] {
            if used[j] || cost[i * n + j] - u[i] - v[j] > tol {
                continue;
            }
            let rows: Vec<usize> = ((i + 1)..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| !used[c] && c != j).collect();
            let (rest, tail) = best_sub_assignment(scores, &rows, &cols);
            if pinned_total + scores.get(i, j) + rest >= optimum - tol {
                current[i] = j;
                current[i + 1..].copy_from_slice(&tail);
                break;
            }
        }
        used[current[i]] = true;
        pinned_total += scores.get(i, current[i]);
    }
    Permutation { map: current }
}

/// Greedy rounding: repeatedly take the largest remaining entry and strike
/// its row and column. Ties go to the smallest `(i, j)` in row-major order.
pub fn greedy_discretize(scores: &AssignmentMatrix) -> Permutation {
    let n = scores.n();
    let mut map = vec![usize::MAX; n];
    let mut col_used = vec![false; n];
    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for i in (0..n).filter(|&i| map[i] == usize::MAX) {
            for j in (0..n).filter(|&j| !col_used[j]) {
                if best.is_none_or(|(bi, bj)| scores.get(i, j) > scores.get(bi, bj)) {
                    best = Some((i, j));
                }
            }
        }
        let (i, j) = best.expect("a free row and column remain");
        map[i] = j;
        col_used[j] = true;
    }
    Permutation { map }
}
