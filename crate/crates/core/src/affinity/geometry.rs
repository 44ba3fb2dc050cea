use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use spade::{DelaunayTriangulation, Point2, Triangulation};

use crate::{Error, Result};

/// A finite planar point set, optionally labelled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<[f64; 2]>,
    labels: Option<Vec<i64>>,
}

impl PointSet {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        Self::with_labels(points, None)
    }

    pub fn with_labels(points: Vec<[f64; 2]>, labels: Option<Vec<i64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPointSet("at least one point is required".into()));
        }
        if let Some(idx) = points
            .iter()
            .position(|p| !p[0].is_finite() || !p[1].is_finite())
        {
            return Err(Error::InvalidPointSet(format!(
                "point {idx} has a non-finite coordinate"
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != points.len() {
                return Err(Error::InvalidPointSet(format!(
                    "{} labels for {} points",
                    labels.len(),
                    points.len()
                )));
            }
            let unique: BTreeSet<_> = labels.iter().collect();
            if unique.len() != labels.len() {
                return Err(Error::InvalidPointSet("labels must be unique".into()));
            }
        }
        Ok(Self { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    fn check_duplicates(&self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            let (pa, pb) = (self.points[a], self.points[b]);
            pa[0].total_cmp(&pb[0]).then(pa[1].total_cmp(&pb[1])).then(a.cmp(&b))
        });
        for w in order.windows(2) {
            if self.points[w[0]] == self.points[w[1]] {
                return Err(Error::DuplicatePoints {
                    first: w[0].min(w[1]),
                    second: w[0].max(w[1]),
                });
            }
        }
        Ok(())
    }
}

/// Length and undirected orientation of a graph edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeAttr {
    pub distance: f64,
    /// Orientation of the edge's supporting line, in `[0, π)`.
    pub angle: f64,
}

impl EdgeAttr {
    pub fn between(a: [f64; 2], b: [f64; 2]) -> Self {
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        Self {
            distance: dx.hypot(dy),
            angle: fold_angle(dy.atan2(dx)),
        }
    }
}

/// Folds an angle onto `[0, π)`.
pub fn fold_angle(theta: f64) -> f64 {
    let folded = theta.rem_euclid(PI);
    // rem_euclid may round up to exactly π for tiny negative inputs
    if folded >= PI {
        0.0
    } else {
        folded
    }
}

/// Circular distance between two line orientations in `[0, π)`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(PI - d)
}

/// Undirected simple graph over `node_count` nodes with optional per-edge attributes.
///
/// Edges are stored as `(i, k)` with `i < k`, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    attrs: Option<Vec<EdgeAttr>>,
}

impl AttributedGraph {
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("node count must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::EdgeOutOfRange(a, b));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Self {
            node_count,
            edges: set.into_iter().collect(),
            attrs: None,
        })
    }

    pub fn empty(node_count: usize) -> Result<Self> {
        Self::new(node_count, [])
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn attrs(&self) -> Option<&[EdgeAttr]> {
        self.attrs.as_deref()
    }

    /// Extends the node count with isolated (dummy) nodes.
    pub fn with_node_count(mut self, node_count: usize) -> Result<Self> {
        if node_count < self.node_count {
            return Err(Error::InvalidGraph(format!(
                "cannot shrink graph from {} to {node_count} nodes",
                self.node_count
            )));
        }
        self.node_count = node_count;
        Ok(self)
    }

    /// Mean edge length, if attributes are present and there is at least one edge.
    pub fn mean_edge_length(&self) -> Option<f64> {
        let attrs = self.attrs.as_ref()?;
        if attrs.is_empty() {
            return None;
        }
        Some(attrs.iter().map(|a| a.distance).sum::<f64>() / attrs.len() as f64)
    }
}

/// Delaunay triangulation edges of a point set.
pub fn delaunay_triangulate(points: &PointSet) -> Result<AttributedGraph> {
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    points.check_duplicates()?;

    let mut triangulation: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    let mut by_handle = vec![usize::MAX; n];
    for (idx, p) in points.points().iter().enumerate() {
        let handle = triangulation
            .insert(Point2::new(p[0], p[1]))
            .map_err(|e| Error::InvalidPointSet(format!("point {idx}: {e:?}")))?;
        by_handle[handle.index()] = idx;
    }
    if triangulation.num_inner_faces() == 0 {
        return Err(Error::CollinearInput);
    }

    let edges = triangulation.undirected_edges().map(|edge| {
        let [a, b] = edge.vertices();
        (by_handle[a.fix().index()], by_handle[b.fix().index()])
    });
    AttributedGraph::new(n, edges)
}

/// Symmetrized k-nearest-neighbour graph. Ties in distance go to the lower index.
pub fn knn_graph(points: &PointSet, k: usize) -> Result<AttributedGraph> {
    let n = points.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    let pts = points.points();
    let dist2 = |a: usize, b: usize| {
        let (dx, dy) = (pts[a][0] - pts[b][0], pts[a][1] - pts[b][1]);
        dx * dx + dy * dy
    };

    let mut edges = BTreeSet::new();
    let mut others: Vec<usize> = Vec::with_capacity(n - 1);
    for i in 0..n {
        others.clear();
        others.extend((0..n).filter(|&j| j != i));
        others.sort_by(|&a, &b| dist2(i, a).total_cmp(&dist2(i, b)).then(a.cmp(&b)));
        for &j in &others[..k] {
            edges.insert((i.min(j), i.max(j)));
        }
    }
    AttributedGraph::new(n, edges)
}

/// Fills in distance and orientation for every edge of `graph`.
pub fn compute_edge_attrs(points: &PointSet, graph: &AttributedGraph) -> Result<AttributedGraph> {
    let pts = points.points();
    let attrs = graph
        .edges
        .iter()
        .map(|&(i, k)| {
            if i >= pts.len() || k >= pts.len() {
                return Err(Error::EdgeOutOfRange(i, k));
            }
            Ok(EdgeAttr::between(pts[i], pts[k]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AttributedGraph {
        attrs: Some(attrs),
        ..graph.clone()
    })
}

/// Graph construction strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Delaunay,
    Knn,
}

pub const DEFAULT_FALLBACK_K: usize = 5;

/// Builds the connectivity graph for a point set (edges only).
///
/// Delaunay input that is degenerate (fewer than three points, or all
/// collinear) falls back to a k-NN graph with `k = min(5, n − 1)`; a single
/// point yields an edgeless graph. Duplicate points remain an error.
pub fn build_graph(points: &PointSet, kind: GraphKind, k: Option<usize>) -> Result<AttributedGraph> {
    let n = points.len();
    let fallback_k = DEFAULT_FALLBACK_K.min(n.saturating_sub(1));
    match kind {
        GraphKind::Delaunay => match delaunay_triangulate(points) {
            Ok(graph) => Ok(graph),
            Err(err @ (Error::CollinearInput | Error::TooFewPoints { .. })) => {
                points.check_duplicates()?;
                log::warn!("{err}; falling back to {fallback_k}-NN graph");
                if fallback_k == 0 {
                    AttributedGraph::empty(n)
                } else {
                    knn_graph(points, fallback_k)
                }
            }
            Err(err) => Err(err),
        },
        GraphKind::Knn => {
            if n == 1 {
                return AttributedGraph::empty(1);
            }
            knn_graph(points, k.unwrap_or(fallback_k))
        }
    }
}
