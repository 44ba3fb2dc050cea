use std::collections::btree_map::{BTreeMap, Entry};
use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::{angle_distance, AttributedGraph};
use crate::solver::ops;
use crate::{vec_index, Error, Result};

/// Sparse symmetric nonnegative `N × N` matrix, `N = n²`, over candidate assignments.
///
/// Row and column `p = i + j·n` stand for the assignment of model node `i`
/// to data node `j`. Storage is compressed-row with column indices sorted
/// within each row; only strictly positive entries are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl AffinityMatrix {
    pub fn builder(n: usize) -> AffinityBuilder {
        AffinityBuilder::new(n)
    }

    /// All-zero matrix over `n × n` assignments.
    pub fn zeros(n: usize) -> Result<Self> {
        AffinityBuilder::new(n).build()
    }

    /// Builds from a dense row-major `N × N` array. Must be symmetric.
    pub fn from_dense(n: usize, dense: &[f64]) -> Result<Self> {
        let dim = n * n;
        if dense.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: dense.len(),
            });
        }
        let mut builder = AffinityBuilder::new(n);
        for p in 0..dim {
            for q in p..dim {
                let (a, b) = (dense[p * dim + q], dense[q * dim + p]);
                if a != b {
                    return Err(Error::InvalidEntry(format!(
                        "asymmetric entry ({p}, {q}): {a} vs {b}"
                    )));
                }
                builder.set(p, q, a)?;
            }
        }
        builder.build()
    }

    /// Side of the assignment matrix.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Side of `W` itself, `n²`.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, p: usize) -> (&[usize], &[f64]) {
        let range = self.row_ptr[p]..self.row_ptr[p + 1];
        (&self.cols[range.clone()], &self.vals[range])
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        if p >= self.dim() || q >= self.dim() {
            return 0.0;
        }
        let (cols, vals) = self.row(p);
        cols.binary_search(&q).map_or(0.0, |idx| vals[idx])
    }

    /// `W_{ij,kl}` addressed by assignment pairs.
    pub fn get_pair(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> f64 {
        self.get(vec_index(self.n, i, j), vec_index(self.n, k, l))
    }

    /// Stored entries as `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim()).flat_map(move |p| {
            let (cols, vals) = self.row(p);
            cols.iter().zip(vals).map(move |(&q, &w)| (p, q, w))
        })
    }

    /// `out = W · x`. Rows are accumulated in stored column order.
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        for (p, slot) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(p);
            *slot = cols.iter().zip(vals).map(|(&q, &w)| w * x[q]).sum();
        }
        ops::record(self.nnz() as u64);
    }

    /// `xᵀ W x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        (0..self.dim())
            .map(|p| {
                let (cols, vals) = self.row(p);
                x[p] * cols.iter().zip(vals).map(|(&q, &w)| w * x[q]).sum::<f64>()
            })
            .sum()
    }

    pub fn max_entry(&self) -> f64 {
        self.vals.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries().all(|(p, q, w)| self.get(q, p) == w)
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.dim()).all(|p| self.get(p, p) == 0.0)
    }

    /// Dense row-major copy. Intended for small matrices and tests.
    pub fn to_dense(&self) -> Vec<f64> {
        let dim = self.dim();
        let mut dense = vec![0.0; dim * dim];
        for (p, q, w) in self.entries() {
            dense[p * dim + q] = w;
        }
        dense
    }
}

/// Order-independent assembly of an [`AffinityMatrix`].
///
/// Every insert is mirrored, so the result is symmetric by construction.
/// Zero weights are dropped. Setting the same position twice with different
/// values is an error.
#[derive(Debug, Clone)]
pub struct AffinityBuilder {
    n: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl AffinityBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, p: usize, q: usize, w: f64) -> Result<&mut Self> {
        let dim = self.n * self.n;
        if p >= dim || q >= dim {
            return Err(Error::InvalidEntry(format!(
                "position ({p}, {q}) outside {dim} × {dim}"
            )));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidEntry(format!(
                "weight at ({p}, {q}) must be finite and nonnegative, got {w}"
            )));
        }
        if w == 0.0 {
            return Ok(self);
        }
        self.insert(p, q, w)?;
        if p != q {
            self.insert(q, p, w)?;
        }
        Ok(self)
    }

    /// Sets `W_{ij,kl}` (and its mirror `W_{kl,ij}`).
    pub fn set_pair(&mut self, (i, j): (usize, usize), (k, l): (usize, usize), w: f64) -> Result<&mut Self> {
        if [i, j, k, l].iter().any(|&x| x >= self.n) {
            return Err(Error::InvalidEntry(format!(
                "assignment pair (({i}, {j}), ({k}, {l})) outside n = {}",
                self.n
            )));
        }
        self.set(vec_index(self.n, i, j), vec_index(self.n, k, l), w)
    }

    fn insert(&mut self, p: usize, q: usize, w: f64) -> Result<()> {
        match self.entries.entry((p, q)) {
            Entry::Vacant(slot) => {
                slot.insert(w);
                Ok(())
            }
            Entry::Occupied(slot) if *slot.get() == w => Ok(()),
            Entry::Occupied(slot) => Err(Error::InvalidEntry(format!(
                "conflicting values at ({p}, {q}): {} vs {w}",
                slot.get()
            ))),
        }
    }

    pub fn build(self) -> Result<AffinityMatrix> {
        if self.n == 0 {
            return Err(Error::InvalidEntry("n must be positive".into()));
        }
        let dim = self.n * self.n;
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(self.entries.len());
        let mut vals = Vec::with_capacity(self.entries.len());
        for (&(p, q), &w) in &self.entries {
            row_ptr[p + 1] += 1;
            cols.push(q);
            vals.push(w);
        }
        for p in 0..dim {
            row_ptr[p + 1] += row_ptr[p];
        }
        Ok(AffinityMatrix {
            n: self.n,
            row_ptr,
            cols,
            vals,
        })
    }
}

/// Gaussian bandwidths of the edge-pair affinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffinityParams {
    pub sigma_d: f64,
    pub sigma_theta: f64,
}

impl AffinityParams {
    pub const DEFAULT_SIGMA_THETA: f64 = FRAC_PI_4;

    /// Defaults for a given model graph: `σ_d` is its mean edge length
    /// (1 when it has no edges), `σ_θ = π/4`.
    pub fn for_model(model: &AttributedGraph) -> Self {
        Self {
            sigma_d: model.mean_edge_length().filter(|d| *d > 0.0).unwrap_or(1.0),
            sigma_theta: Self::DEFAULT_SIGMA_THETA,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("sigma_d", self.sigma_d), ("sigma_theta", self.sigma_theta)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveSigma { name, value });
            }
        }
        Ok(())
    }
}

/// Assembles `W` from two attributed graphs of equal node count.
///
/// For model edge `(i, k)` and data edge `(j, l)`,
/// `W_{ij,kl} = W_{il,kj} = exp(−(d_ik − d_jl)²/σ_d² − Δθ²/σ_θ²)` with `Δθ`
/// the circular orientation difference. Everything else is zero.
pub fn build_affinity(
    model: &AttributedGraph,
    data: &AttributedGraph,
    params: &AffinityParams,
) -> Result<AffinityMatrix> {
    params.validate()?;
    let n = model.node_count();
    if n != data.node_count() {
        return Err(Error::NodeCountMismatch {
            model: n,
            data: data.node_count(),
        });
    }
    let model_attrs = model.attrs().ok_or(Error::MissingEdgeAttrs)?;
    let data_attrs = data.attrs().ok_or(Error::MissingEdgeAttrs)?;
    let (inv_d, inv_t) = (
        1.0 / (params.sigma_d * params.sigma_d),
        1.0 / (params.sigma_theta * params.sigma_theta),
    );

    let triplets: Vec<(usize, usize, f64)> = model
        .edges()
        .par_iter()
        .zip(model_attrs.par_iter())
        .flat_map_iter(|(&(i, k), ma)| {
            data.edges()
                .iter()
                .zip(data_attrs)
                .flat_map(move |(&(j, l), da)| {
                    let dd = ma.distance - da.distance;
                    let dt = angle_distance(ma.angle, da.angle);
                    let w = (-dd * dd * inv_d - dt * dt * inv_t).exp();
                    [
                        (vec_index(n, i, j), vec_index(n, k, l), w),
                        (vec_index(n, i, l), vec_index(n, k, j), w),
                    ]
                })
        })
        .collect();

    let mut builder = AffinityBuilder::new(n);
    for (p, q, w) in triplets {
        builder.set(p, q, w)?;
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affinity::geometry::{compute_edge_attrs, delaunay_triangulate, PointSet};

    fn attributed(points: &[[f64; 2]]) -> AttributedGraph {
        let ps = PointSet::new(points.to_vec()).unwrap();
        let g = delaunay_triangulate(&ps).unwrap();
        compute_edge_attrs(&ps, &g).unwrap()
    }

    #[test]
    fn builder_mirrors_and_drops_zeros() {
        let mut b = AffinityMatrix::builder(2);
        b.set(0, 3, 0.5).unwrap().set(1, 2, 0.0).unwrap();
        let w = b.build().unwrap();
        assert_eq!(w.nnz(), 2);
        assert_eq!(w.get(3, 0), 0.5);
        assert!(w.is_symmetric());
    }

    #[test]
    fn builder_rejects_bad_entries() {
        let mut b = AffinityMatrix::builder(2);
        assert!(b.set(0, 4, 1.0).is_err());
        assert!(b.set(0, 1, -1.0).is_err());
        assert!(b.set(0, 1, f64::INFINITY).is_err());
        b.set(0, 1, 1.0).unwrap();
        assert!(b.set(1, 0, 1.0).is_ok());
        assert!(b.set(1, 0, 2.0).is_err());
    }

    #[test]
    fn dense_round_trip() {
        let dense = vec![
            0.0, 1.0, 0.0, 0.5, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 2.0, //
            0.5, 0.0, 2.0, 0.0,
        ];
        let w = AffinityMatrix::from_dense(2, &dense).unwrap();
        assert_eq!(w.to_dense(), dense);
        let mut asym = dense.clone();
        asym[1] = 0.9;
        assert!(AffinityMatrix::from_dense(2, &asym).is_err());
    }

    #[test]
    fn identical_graphs_give_unit_consistent_entries() {
        let g = attributed(&[[0.0, 0.0], [1.0, 0.1], [0.3, 0.8], [1.2, 1.1]]);
        let params = AffinityParams {
            sigma_d: 0.7,
            sigma_theta: 0.3,
        };
        let w = build_affinity(&g, &g, &params).unwrap();
        for &(i, k) in g.edges() {
            assert_eq!(w.get_pair((i, i), (k, k)), 1.0);
            assert_eq!(w.get_pair((k, k), (i, i)), 1.0);
        }
        assert!(w.is_symmetric());
        assert!(w.has_zero_diagonal());
        assert!(w.max_entry() <= 1.0);
        assert!(w.nnz() <= 4 * g.edge_count() * g.edge_count());
    }

    #[test]
    fn circular_angle_difference() {
        let model = compute_edge_attrs(
            &PointSet::new(vec![[0.0, 0.0], [1.0, 0.0]]).unwrap(),
            &AttributedGraph::new(2, [(0, 1)]).unwrap(),
        )
        .unwrap();
        let theta = std::f64::consts::PI - 0.01;
        let data = compute_edge_attrs(
            &PointSet::new(vec![[0.0, 0.0], [theta.cos(), theta.sin()]]).unwrap(),
            &AttributedGraph::new(2, [(0, 1)]).unwrap(),
        )
        .unwrap();
        let params = AffinityParams {
            sigma_d: 1.0,
            sigma_theta: 1.0,
        };
        let w = build_affinity(&model, &data, &params).unwrap();
        let expected = (-1e-4f64).exp();
        assert!((w.get_pair((0, 0), (1, 1)) - expected).abs() < 1e-12);
        assert!((w.get_pair((0, 1), (1, 0)) - expected).abs() < 1e-12);
        assert_eq!(w.nnz(), 4);
    }

    #[test]
    fn build_affinity_errors() {
        let g3 = attributed(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let g4 = attributed(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.2]]);
        let ok = AffinityParams {
            sigma_d: 1.0,
            sigma_theta: 1.0,
        };
        assert!(matches!(
            build_affinity(&g3, &g4, &ok),
            Err(Error::NodeCountMismatch { model: 3, data: 4 })
        ));
        let bad = AffinityParams {
            sigma_d: 0.0,
            sigma_theta: 1.0,
        };
        assert!(matches!(
            build_affinity(&g3, &g3, &bad),
            Err(Error::NonPositiveSigma { name: "sigma_d", .. })
        ));
        let bare = AttributedGraph::new(3, [(0, 1)]).unwrap();
        assert!(matches!(build_affinity(&bare, &bare, &ok), Err(Error::MissingEdgeAttrs)));
    }

    #[test]
    fn default_params_use_mean_edge_length() {
        let g = attributed(&[[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]);
        let p = AffinityParams::for_model(&g);
        assert!((p.sigma_d - 4.0).abs() < 1e-12);
        assert_eq!(p.sigma_theta, FRAC_PI_4);
    }
}
