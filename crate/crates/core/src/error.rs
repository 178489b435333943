use thiserror::Error;

/// Errors raised by the laboratory's operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("ball propagation requires eigenbasis coefficients")]
    MissingBallCoefficients,

    #[error("operation `{op}` is not defined on {geometry} geometry")]
    UnsupportedGeometry { op: &'static str, geometry: &'static str },

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("frequency cutoff N={cutoff} exceeds the Nyquist limit of an {points}-point grid (need 2N+1 <= n)")]
    BeyondNyquist { cutoff: usize, points: usize },

    #[error("rank deficiency at function index {index}: residual norm {residual:e} below pivot threshold")]
    RankDeficient { index: usize, residual: f64 },

    #[error("zero frequency obstructs homogeneous lift (|f^(0)| = {0:e})")]
    ZeroFrequency(f64),

    #[error("kernel matrix of size {points}x{points} exceeds the {limit}-point budget")]
    KernelTooLarge { points: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("oscillation not resolved: step {step:e} exceeds the admissible step {required:e}")]
    UnderResolved { step: f64, required: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("inadmissible configuration: {0}")]
    Inadmissible(String),

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("matrix budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
