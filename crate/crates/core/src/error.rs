use thiserror::Error;

/// Errors produced by the simulator and the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: qudit dimension must be at least 2")]
    InvalidDimension(usize),

    #[error("unsupported dimension {0}: built-in schedules exist for d = 2, 3, 4")]
    UnsupportedDimension(usize),

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is neither diagonal nor anti-diagonal up to global phase (off-axis magnitude {0:e})")]
    NotMonomial(f64),

    #[error("empty operator list")]
    EmptyComposition,

    #[error("t out of range: {0} not in [0, 1]")]
    TOutOfRange(f64),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("too few points for a fringe fit: {0} (need at least 8)")]
    TooFewPoints(usize),

    #[error("visibility too low for phase extraction: {0:.4} (threshold {1})")]
    LowVisibility(f64, f64),

    #[error("total phase undefined: overlap between initial and final state is {0:e}")]
    DegenerateOverlap(f64),

    #[error("malformed scan file: {0}")]
    MalformedScan(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
