use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),
    #[error("duplicate points at indices {first} and {second}")]
    DuplicatePoints { first: usize, second: usize },
    #[error("all points are collinear; triangulation is degenerate")]
    CollinearInput,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("k = {k} must be smaller than the number of points ({n})")]
    InvalidK { k: usize, n: usize },
    #[error("edge ({0}, {1}) references a node outside the graph")]
    EdgeOutOfRange(usize, usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph edge attributes have not been computed")]
    MissingEdgeAttrs,
    #[error("model and data graphs differ in size ({model} vs {data}); pad first")]
    NodeCountMismatch { model: usize, data: usize },
    #[error("bandwidth {name} must be positive and finite, got {value}")]
    NonPositiveSigma { name: &'static str, value: f64 },
    #[error("invalid affinity entry: {0}")]
    InvalidEntry(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid assignment matrix: {0}")]
    InvalidAssignment(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate objective: vec(X)ᵀ W vec(X) = 0, no ascent direction")]
    DegenerateObjective,
    #[error("update produced a non-finite entry")]
    NonFiniteEntry,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("brute-force oracle is capped at n = {max}, got n = {n}")]
    OracleTooLarge { n: usize, max: usize },
    #[error("synthetic instances need at least 3 inliers, got {0}")]
    TooFewInliers(usize),
    #[error("ground truth has no labelled rows")]
    EmptyGroundTruth,
    #[error("unknown method `{0}` (valid: spm, replicator, spectral)")]
    UnknownMethod(String),
    #[error("invalid instance: field `{field}`: {reason}")]
    InvalidInstance { field: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn instance(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInstance {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
