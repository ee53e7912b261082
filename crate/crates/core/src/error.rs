use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum GmmnError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("scale factors must be strictly positive")]
    NonPositiveScale,
    #[error("via point lies outside the bounding box of the endpoints")]
    ViaOutsideBox,
    #[error("instance is empty")]
    EmptyInstance,
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("epsilon must satisfy 0 < eps < 1/4")]
    InvalidEpsilon,
    #[error("coordinate range is empty")]
    EmptyRange,
    #[error("need at least 2 distinct points")]
    TooFewPoints,
    #[error("separator point is not contained in the bounding box of pair {0}")]
    NotSeparated(usize),
    #[error("piercing does not pierce the interval set")]
    NotPiercing,
    #[error("box does not cross the separating axis")]
    BoxNotCrossingAxis,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal feasibility self-check failed")]
    SelfCheckFailed,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GmmnError>;
