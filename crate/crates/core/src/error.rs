use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex index {index} out of range for {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex_count: usize },
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) joins two vertices on the same side")]
    SameSideEdge(usize, usize),
    #[error("side labels cover {got} vertices, expected {expected}")]
    SideLengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size cap exceeded: {needed} vertices requested, cap is {cap}")]
    SizeCapExceeded { needed: u128, cap: usize },
    #[error("work cap exceeded: enumeration would need more than {cap} steps")]
    WorkCapExceeded { cap: u64 },
    #[error("function has {got} values but the graph has {expected} vertices")]
    MisalignedFunction { expected: usize, got: usize },
    #[error("vector has length {got}, expected {expected}")]
    MisalignedVector { expected: usize, got: usize },
    #[error("negative or non-finite weight: {0}")]
    InvalidWeight(String),
    #[error("cannot parse decimal {0:?}")]
    ParseDecimal(String),
    #[error("requested r_max = {r_max} exceeds the exactness horizon R = {radius}")]
    BeyondHorizon { r_max: usize, radius: usize },
    #[error("function is not radial")]
    NonRadial,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no bipartition labels")]
    MissingBipartition,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("near-singular matrix")]
    Singular,
    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("series is identically zero on the requested range")]
    AllZero,
    #[error("no same-parity nonzero pairs in window")]
    ParityMismatch,
    #[error("series too short: {0}")]
    InsufficientTerms(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
