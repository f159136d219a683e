use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("parabolics are not nested: {0}")]
    NotNested(String),
    #[error("coordinates must sum to zero")]
    NotInApartment,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("not convergent: {0}")]
    NotConvergent(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("undecidable comparison: {0}")]
    Undecidable(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
