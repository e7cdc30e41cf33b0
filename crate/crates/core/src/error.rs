use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("inadmissible dimensions n={n}, m={m}: need m < rho(2n) = {rho}")]
    InadmissibleDimensions { n: usize, m: usize, rho: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dilation factor must be nonzero")]
    ZeroDilation,
    #[error("node {0:?} lies outside the stencil interior")]
    OutOfStencil(alloc::vec::Vec<usize>),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grids do not match: {0}")]
    GridMismatch(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("truncation: boundary magnitude {boundary:e} exceeds {limit:e}")]
    Truncation { boundary: f64, limit: f64 },
    #[error("fit failed: residual {residual:e} above {threshold:e} ({hint})")]
    FitFailure { residual: f64, threshold: f64, hint: String },
    #[error("degenerate least-squares problem: {0}")]
    Degenerate(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
