use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational number: {0}")]
    InvalidRational(String),

    #[error("invalid quadratic surd: {0}")]
    InvalidSurd(String),

    #[error("side ratio must be positive, got {0}")]
    NonpositiveRatio(f64),

    #[error("invalid boundary data: {0}")]
    InvalidData(String),

    #[error("point {x} outside [0, {l}]")]
    OutOfInterval { x: f64, l: f64 },

    #[error("point ({x}, {y}) outside the closed rectangle")]
    OutOfDomain { x: f64, y: f64 },

    #[error("under-resolved mode k={k}: {samples} samples give fewer than 8 per period")]
    UnderResolvedMode { k: usize, samples: usize },

    #[error("y={y} is on the wrong side for the {side} basis")]
    SideMismatch { side: &'static str, y: f64 },

    #[error("derivative order {order} exceeds {max}")]
    DerivativeOrder { order: usize, max: usize },

    #[error("invalid problem: {}", .0.join("; "))]
    InvalidProblem(Vec<String>),

    #[error("nonorthogonal data at resonant mode k={k}")]
    NonorthogonalData { k: usize },

    #[error("denominator form not tabulated for this schema")]
    Untabulated,

    #[error("{0} requires a rational side ratio")]
    RequiresRational(&'static str),

    #[error("{0} requires an irrational side ratio")]
    RequiresIrrational(&'static str),

    #[error("no admissible k in range: every |Δ4k| is below {threshold}")]
    NoAdmissibleK { threshold: f64 },

    #[error("invalid scan configuration: {0}")]
    InvalidScan(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
