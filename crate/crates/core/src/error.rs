use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("matrix is not symmetric: |M[{i}][{j}] - M[{j}][{i}]| = {diff:e} exceeds tolerance {tol:e}")]
    AsymmetricInput { i: usize, j: usize, diff: f64, tol: f64 },

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("index subset is empty")]
    EmptySubset,

    #[error("index {0} listed twice in subset")]
    DuplicateIndex(usize),

    #[error("subset index {index} out of range for dimension {n}")]
    SubsetOutOfRange { index: usize, n: usize },

    #[error("{what}: size {size} exceeds limit {limit}")]
    TooLarge { what: &'static str, size: u128, limit: u128 },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("segment carries {0} negative links; at most one is compatible with stability")]
    MultipleNegatives(usize),

    #[error("segment has no negative link")]
    NoNegative,

    #[error("link {index} of the segment is not its unique negative link")]
    NotTheNegativeLink { index: usize },

    #[error("segment with {0} links admits no weight bound (need at least 2)")]
    SegmentTooShort(usize),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("decay rate b must be nonzero")]
    DegenerateB,

    #[error("subset must contain every edge variable: {0}")]
    BadSubset(String),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("no off-diagonal entry at ({0}, {1})")]
    NoSuchEdge(usize, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coupling function `{0}` is not odd")]
    NotOdd(String),

    #[error("unknown coupling function `{0}`")]
    UnknownCoupling(String),

    #[error("parse error: {0}")]
    Parse(String),
}
