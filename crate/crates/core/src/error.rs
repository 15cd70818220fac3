use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported basis order p = {0} (expected one of 4, 6, 8)")]
    UnsupportedOrder(usize),
    #[error("invalid sequence length {len}: {reason}")]
    InvalidLength { len: usize, reason: &'static str },
    #[error("analysis requires level >= 2, got level {0}")]
    LevelTooLow(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("derivative order {alpha} not supported for p = {p}")]
    UnsupportedDerivative { p: usize, alpha: usize },
    #[error("connection coefficient eigenproblem has a {0}-dimensional null space")]
    EigenSolve(usize),
    #[error("operator size {n} too small for order p = {p} (need n >= {min})")]
    OperatorTooSmall { n: usize, p: usize, min: usize },
    #[error("degenerate domain: {0}")]
    DegenerateDomain(&'static str),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("singular pivot at row {row}")]
    SingularPivot { row: usize },
    #[error("matrix is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("no unknown degrees of freedom")]
    EmptyUnknowns,
    #[error("quadrature did not converge (achieved relative change {achieved:e})")]
    Quadrature { achieved: f64 },
    #[error("Riemann states generate vacuum")]
    Vacuum,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("Newton iteration diverged at level {level}: {reason}")]
    Diverged { level: usize, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
