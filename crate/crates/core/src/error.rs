use thiserror::Error;

/// Errors raised by the numerical routines and file readers of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("shape exceeds the grid box")]
    ShapeExceedsGrid,

    #[error("ball lies outside the grid box")]
    BallOutsideGrid,

    #[error("grids do not match")]
    GridMismatch,

    #[error("empty region")]
    EmptyRegion,

    #[error("negative value {value} at cell {index}")]
    NegativeValue { index: usize, value: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("kernel evaluation produced a non-finite value at distance {0}")]
    KernelEvaluation(f64),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNonconvergence(String),

    #[error("cell cap exceeded: {cells} cells > cap {cap}")]
    CellCapExceeded { cells: usize, cap: usize },

    #[error("eigensolve failed: {0}")]
    Eigensolve(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("insufficient signal support: {0}")]
    InsufficientSupport(String),

    #[error("malformed region header: {0}")]
    MalformedHeader(String),

    #[error("dimension mismatch: expected {expected} payload bytes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
