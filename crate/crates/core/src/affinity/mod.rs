//! Attributed point graphs and the pairwise affinity matrix `W`.

mod geometry;
mod matrix;

pub use geometry::{
    angle_distance, build_graph, compute_edge_attrs, delaunay_triangulate, fold_angle, knn_graph,
    AttributedGraph, EdgeAttr, GraphKind, PointSet, DEFAULT_FALLBACK_K,
};
pub use matrix::{build_affinity, AffinityBuilder, AffinityMatrix, AffinityParams};

pub use crate::instance::pad_dummy;
