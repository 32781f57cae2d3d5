use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    InvalidVertex(usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),
    #[error("group is not cocompact (translation lattice has rank {rank} < {dim})")]
    NonCocompact { rank: usize, dim: usize },
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    DegreeMismatch {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    #[error("no opposite-pair structure at vertex {0}")]
    NoOppositeStructure(usize),
    #[error("malformed seed: {0}")]
    MalformedSeed(String),
    #[error("cover is not valid: {0}")]
    InvalidCover(String),
    #[error("fiber over the base vertex has no second point in the half-window; increase the window radius")]
    FiberNotFound,
    #[error("deck group is not transitive on the fiber")]
    NotTransitive,
    #[error("unexpected torsion element in a 2-dimensional deck group")]
    OrbifoldUnexpected,
    #[error("operation requires d {requirement}, got d = {got}")]
    UnsupportedDimension { requirement: &'static str, got: usize },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidVertex(..) => "INVALID_VERTEX",
            Error::Loop(_) => "LOOP",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::InvalidPermutation(_) => "INVALID_PERMUTATION",
            Error::NonCocompact { .. } => "NON_COCOMPACT",
            Error::DegreeMismatch { .. } => "DEGREE_MISMATCH",
            Error::NoOppositeStructure(_) => "NO_OPPOSITE_STRUCTURE",
            Error::MalformedSeed(_) => "MALFORMED_SEED",
            Error::InvalidCover(_) => "INVALID_COVER",
            Error::FiberNotFound => "FIBER_NOT_FOUND",
            Error::NotTransitive => "NOT_TRANSITIVE",
            Error::OrbifoldUnexpected => "ORBIFOLD_UNEXPECTED",
            Error::UnsupportedDimension { .. } => "UNSUPPORTED_DIMENSION",
            Error::BadParameters(_) => "BAD_PARAMETERS",
            Error::MalformedCertificate(_) => "MALFORMED_CERTIFICATE",
            Error::CapExceeded(_) => "CAP_EXCEEDED",
            Error::Parse { .. } => "PARSE",
        }
    }
}
