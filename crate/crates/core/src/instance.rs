//! Matching instances and their JSON file format.
//!
//! ```json
//! {
//!   "model_points": [[x, y], ...],
//!   "data_points": [[x, y], ...],
//!   "ground_truth": [j0, j1, ...],          // optional, -1 = don't care
//!   "params": {"sigma_d": 0.2, "sigma_theta": 0.78, "graph": "delaunay", "k": 5}
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::affinity::{
    build_affinity, build_graph, compute_edge_attrs, AffinityMatrix, AffinityParams, GraphKind,
    PointSet,
};
use crate::{Error, Result};

/// Per-model-row ground truth; `None` marks an outlier or dummy ("don't care").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth(Vec<Option<usize>>);

impl GroundTruth {
    pub fn new(rows: Vec<Option<usize>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for j in rows.iter().flatten() {
            if !seen.insert(*j) {
                return Err(Error::InvalidPermutation(format!(
                    "data index {j} assigned twice in ground truth"
                )));
            }
        }
        Ok(Self(rows))
    }

    pub fn rows(&self) -> &[Option<usize>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labelled(&self) -> usize {
        self.0.iter().flatten().count()
    }

    pub(crate) fn padded(&self, rows: usize) -> Self {
        let mut out = self.0.clone();
        out.resize(rows.max(out.len()), None);
        Self(out)
    }
}

/// How a synthetic instance was generated; regenerating from it reproduces the instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub seed: u64,
    pub n_inliers: usize,
    pub n_outliers: usize,
    pub noise_sigma: f64,
    pub rotation: f64,
    pub translation: [f64; 2],
}

/// Optional affinity and graph overrides carried by an instance file.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InstanceParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchInstance {
    pub model: PointSet,
    pub data: PointSet,
    pub ground_truth: Option<GroundTruth>,
    pub meta: Option<InstanceMeta>,
    pub params: InstanceParams,
    model_dummies: usize,
    data_dummies: usize,
}

impl MatchInstance {
    pub fn new(model: PointSet, data: PointSet, ground_truth: Option<GroundTruth>) -> Result<Self> {
        if let Some(gt) = &ground_truth {
            if gt.len() > model.len() {
                return Err(Error::instance(
                    "ground_truth",
                    format!("{} entries for {} model points", gt.len(), model.len()),
                ));
            }
            if let Some(j) = gt.rows().iter().flatten().find(|&&j| j >= data.len()) {
                return Err(Error::instance(
                    "ground_truth",
                    format!("data index {j} out of range (data has {} points)", data.len()),
                ));
            }
        }
        let ground_truth = ground_truth.map(|gt| gt.padded(model.len()));
        Ok(Self {
            model,
            data,
            ground_truth,
            meta: None,
            params: InstanceParams::default(),
            model_dummies: 0,
            data_dummies: 0,
        })
    }

    pub fn with_params(mut self, params: InstanceParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_meta(mut self, meta: InstanceMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    /// Model side size including dummy features.
    pub fn model_nodes(&self) -> usize {
        self.model.len() + self.model_dummies
    }

    /// Data side size including dummy features.
    pub fn data_nodes(&self) -> usize {
        self.data.len() + self.data_dummies
    }

    /// Side of the (square) assignment problem once padded.
    pub fn node_count(&self) -> usize {
        self.model_nodes().max(self.data_nodes())
    }

    pub fn dummies(&self) -> (usize, usize) {
        (self.model_dummies, self.data_dummies)
    }

    /// Builds both graphs and the affinity matrix over `node_count()` nodes.
    ///
    /// Dummy nodes carry no edges, so every entry touching one is zero.
    pub fn affinity(&self) -> Result<AffinityMatrix> {
        let n = self.node_count();
        let kind = self.params.graph.unwrap_or(GraphKind::Delaunay);
        let graph = |points: &PointSet| -> Result<_> {
            let g = build_graph(points, kind, self.params.k)?;
            compute_edge_attrs(points, &g)?.with_node_count(n)
        };
        let model = graph(&self.model)?;
        let data = graph(&self.data)?;
        let defaults = AffinityParams::for_model(&model);
        let params = AffinityParams {
            sigma_d: self.params.sigma_d.unwrap_or(defaults.sigma_d),
            sigma_theta: self.params.sigma_theta.unwrap_or(defaults.sigma_theta),
        };
        build_affinity(&model, &data, &params)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| Error::instance("<document>", e.to_string()))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::instance("<document>", "expected a JSON object"))?;

        let model = parse_points(obj, "model_points")?;
        let data = parse_points(obj, "data_points")?;
        let ground_truth = match obj.get("ground_truth") {
            None | Some(Value::Null) => None,
            Some(v) => Some(parse_ground_truth(v)?),
        };
        let params = match obj.get("params") {
            None | Some(Value::Null) => InstanceParams::default(),
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|e| Error::instance("params", e.to_string()))?,
        };
        let meta = match obj.get("meta") {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                serde_json::from_value(v.clone())
                    .map_err(|e| Error::instance("meta", e.to_string()))?,
            ),
        };
        let mut inst = Self::new(model, data, ground_truth)?.with_params(params);
        inst.meta = meta;
        Ok(inst)
    }

    /// Serializes to the instance file format. Dummy padding is not written.
    pub fn to_json(&self) -> String {
        let gt = self.ground_truth.as_ref().map(|gt| {
            gt.rows()[..self.model.len()]
                .iter()
                .map(|j| j.map_or(-1, |j| j as i64))
                .collect::<Vec<_>>()
        });
        let doc = InstanceFile {
            model_points: self.model.points(),
            data_points: self.data.points(),
            ground_truth: gt,
            params: (self.params != InstanceParams::default()).then_some(&self.params),
            meta: self.meta.as_ref(),
        };
        serde_json::to_string_pretty(&doc).expect("instance serialization is infallible")
    }
}

#[derive(Serialize)]
struct InstanceFile<'a> {
    model_points: &'a [[f64; 2]],
    data_points: &'a [[f64; 2]],
    #[serde(skip_serializing_if = "Option::is_none")]
    ground_truth: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<&'a InstanceParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<&'a InstanceMeta>,
}

fn parse_points(obj: &Map<String, Value>, field: &str) -> Result<PointSet> {
    let arr = obj
        .get(field)
        .ok_or_else(|| Error::instance(field, "missing"))?
        .as_array()
        .ok_or_else(|| Error::instance(field, "expected an array of [x, y] pairs"))?;
    let points = arr
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            let pair = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                Error::instance(format!("{field}[{idx}]"), "expected [x, y]")
            })?;
            let coord = |v: &Value| {
                v.as_f64()
                    .ok_or_else(|| Error::instance(format!("{field}[{idx}]"), "coordinates must be numbers"))
            };
            Ok([coord(&pair[0])?, coord(&pair[1])?])
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(points).map_err(|e| Error::instance(field, e.to_string()))
}

fn parse_ground_truth(v: &Value) -> Result<GroundTruth> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::instance("ground_truth", "expected an array of integers"))?;
    let rows = arr
        .iter()
        .enumerate()
        .map(|(idx, j)| match j.as_i64() {
            Some(-1) => Ok(None),
            Some(j) if j >= 0 => Ok(Some(j as usize)),
            _ => Err(Error::instance(
                format!("ground_truth[{idx}]"),
                "expected a data index or -1",
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    GroundTruth::new(rows).map_err(|e| Error::instance("ground_truth", e.to_string()))
}

/// Pads the smaller side with dummy features so both sides have equal size.
///
/// Dummies take part in no edges; model-side dummy rows are "don't care" in
/// the ground truth.
pub fn pad_dummy(inst: &MatchInstance) -> MatchInstance {
    let n = inst.node_count();
    let mut out = inst.clone();
    out.model_dummies = n - inst.model.len();
    out.data_dummies = n - inst.data.len();
    out.ground_truth = inst.ground_truth.as_ref().map(|gt| gt.padded(n));
    out
}
