use crate::space::MetricViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("metric axioms violated ({} violation(s))", .0.len())]
    MetricViolations(Vec<MetricViolation>),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("a metric space needs at least one point")]
    EmptySpace,

    #[error("label count {labels} does not match matrix size {rows}")]
    LabelCount { labels: usize, rows: usize },

    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("non-finite distance at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("unknown metric `{0}` (expected euclidean, l1 or chebyshev)")]
    UnknownMetric(String),

    #[error("ragged coordinates: point {index} has dimension {found}, expected {expected}")]
    RaggedCoordinates {
        index: usize,
        found: usize,
        expected: usize,
    },

    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("point set is empty")]
    EmptySet,

    #[error("operation needs at least two points")]
    SingletonSpace,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cover misses target point {0}")]
    Uncovered(usize),

    #[error("bad-set search exceeded its limit of {0} nodes")]
    SearchLimit(u64),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
