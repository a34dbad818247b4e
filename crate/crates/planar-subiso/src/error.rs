use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("vertex index {0} out of range (n = {1})")]
    BadVertex(usize, usize),
    #[error("unknown id in sequence: {0}")]
    UnknownId(String),
    #[error("rotation of vertex {0} is not a permutation of its neighbor set")]
    MalformedRotation(usize),
    #[error("rotation system has positive genus: component Euler count {got}, expected {expected}")]
    NonPlanarEmbedding { got: isize, expected: isize },
    #[error("graph is not planar")]
    NonPlanar,
    #[error("host graph is not planar")]
    NonPlanarHost,
    #[error("pattern graph is not planar")]
    NonPlanarPattern,
    #[error("pattern graph is not connected")]
    PatternDisconnected,
    #[error("pattern too large: {0} exceeds configured budget {1}")]
    PatternTooLarge(usize, usize),
    #[error("cannot triangulate while keeping the graph simple")]
    CannotTriangulate,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not a triangulation")]
    NotTriangulation,
    #[error("radial graph is disconnected")]
    DisconnectedRadial,
    #[error("decomposition width {got} exceeds bound {bound}")]
    WidthBoundViolated { got: usize, bound: usize },
    #[error("instance exceeds oracle budget: {0}")]
    BudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
