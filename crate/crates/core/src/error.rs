use thiserror::Error;

/// Errors raised by the geometry, estimation, tangent and witness routines.
///
/// Indices and levels are 1-based, matching the way frames are numbered.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("rank deficiency at index {index}")]
    RankDeficient { index: usize },

    #[error("vectors are not orthonormal within tolerance")]
    NotOrthonormal,

    #[error("degenerate simplex: vertices are affinely dependent")]
    DegenerateSimplex,

    #[error("point lies off the affine hull (distance {distance:e})")]
    OffAffineHull { distance: f64 },

    #[error("point is not contained in the simplex")]
    NotInSimplex,

    #[error("scale at level {level} is not strictly positive")]
    NonPositiveScale { level: usize },

    #[error("no positive step at level {level}")]
    NoPositiveStep { level: usize },

    #[error("flag simplices do not share base and frame: {0}")]
    MismatchedFlags(String),

    #[error("frame does not span the ambient space ({rank} of {dim})")]
    FrameNotFull { rank: usize, dim: usize },

    #[error("sequence point {index} coincides with the base point")]
    PointAtBase { index: usize },

    #[error("window {window} is larger than the {available} available points")]
    WindowTooLarge { window: usize, available: usize },

    #[error("too few points near the base: {found} < {required}")]
    TooFewPoints { found: usize, required: usize },

    #[error("invalid sample plan: {0}")]
    InvalidPlan(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
