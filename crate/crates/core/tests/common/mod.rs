//! Independent reference implementations shared by the test targets.
#![allow(dead_code, clippy::needless_range_loop)]

use spm_core::{AffinityMatrix, AssignmentMatrix};

/// `W vec(X)` by a plain dense loop, with `vec` written out explicitly.
pub fn dense_product(w: &AffinityMatrix, x: &AssignmentMatrix) -> Vec<Vec<f64>> {
    let n = x.n();
    let dense = w.to_dense();
    let dim = n * n;
    let mut vx = Vec::with_capacity(dim);
    for j in 0..n {
        for i in 0..n {
            vx.push(x.get(i, j));
        }
    }
    let mut m = vec![vec![0.0; n]; n];
    for j in 0..n {
        for i in 0..n {
            let row = i + j * n;
            m[i][j] = (0..dim).map(|q| dense[row * dim + q] * vx[q]).sum();
        }
    }
    m
}

/// `𝟙ᵀ(XᵀX + XXᵀ)𝟙` with both products formed explicitly.
pub fn constraint_matrix_form(x: &AssignmentMatrix) -> f64 {
    let n = x.n();
    let mut total = 0.0;
    for a in 0..n {
        for b in 0..n {
            let xtx: f64 = (0..n).map(|k| x.get(k, a) * x.get(k, b)).sum();
            let xxt: f64 = (0..n).map(|k| x.get(a, k) * x.get(b, k)).sum();
            total += xtx + xxt;
        }
    }
    total
}

pub fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Positive when `d` lies strictly inside the circumcircle of counter-clockwise `a, b, c`.
pub fn in_circle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> f64 {
    let rows = [a, b, c].map(|p| {
        let (dx, dy) = (p[0] - d[0], p[1] - d[1]);
        [dx, dy, dx * dx + dy * dy]
    });
    rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
}

pub fn brute_force_delaunay(points: &[[f64; 2]]) -> Vec<(usize, usize)> {
    let n = points.len();
    let mut edges = std::collections::BTreeSet::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (a, mut b, mut c) = (points[i], points[j], points[k]);
                let o = orient(a, b, c);
                if o == 0.0 {
                    continue;
                }
                if o < 0.0 {
                    std::mem::swap(&mut b, &mut c);
                }
                let empty = (0..n)
                    .filter(|&d| d != i && d != j && d != k)
                    .all(|d| in_circle(a, b, c, points[d]) <= 0.0);
                if empty {
                    edges.extend([(i, j), (i, k), (j, k)]);
                }
            }
        }
    }
    edges.into_iter().collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

