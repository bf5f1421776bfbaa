use thiserror::Error;

/// Errors raised by the tensor algebra, map construction and matrix kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index out of range: {what} = {index}, valid range 1..={bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("map is not of full rank: sigma_min = {sigma_min:e}, sigma_max = {sigma_max:e}")]
    NotFullRank { sigma_min: f64, sigma_max: f64 },

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("iteration did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite (lambda_min = {lambda_min:e}, lambda_max = {lambda_max:e})")]
    NotPositiveDefinite { lambda_min: f64, lambda_max: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("no *_M-identity tensor exists for this map (all-ones fiber residual {residual:e})")]
    NoIdentityTensor { residual: f64 },

    #[error("hat-domain slice {slice} is singular")]
    SingularSlice { slice: usize },

    #[error("tensor is not *_M-invertible (slice inverses leave the image of the map, residual {residual:e})")]
    NotMInvertible { residual: f64 },

    #[error("operation does not support {0} maps")]
    MapKindUnsupported(&'static str),

    #[error("tensor is not *_M-pseudo-positive-definite")]
    NotPpd,

    #[error("operation requires an invertible map")]
    MapNotInvertible,

    #[error("expected a {expected} tensor, got {got}")]
    WrongShape { expected: &'static str, got: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation rank {k} outside 1..={max}")]
    BadTruncation { k: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
