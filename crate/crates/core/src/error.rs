use thiserror::Error;

/// Errors raised by the classification routines and the input layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: ||M - M*|| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("empty input")]
    EmptyInput,

    #[error("basis is not orthonormal: ||Q*Q - I|| = {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("{which} is not normal (residual {residual:e})")]
    NotNormal { which: &'static str, residual: f64 },

    #[error("{which} is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { which: &'static str, min_eigenvalue: f64 },

    #[error("B and C do not commute: ||[B, C]|| = {residual:e}")]
    NotCommuting { residual: f64 },

    #[error("subspace is not invariant: ||(I - P)SP|| = {residual:e}")]
    InvarianceViolated { residual: f64 },

    #[error("restriction to the spanned subspace is not {n}-normal (residual {residual:e})")]
    NotNNormalOnL { n: usize, residual: f64 },

    #[error("ambient operator is not {n}-normal (residual {residual:e})")]
    AmbientNotNNormal { n: usize, residual: f64 },

    #[error("U does not intertwine the restrictions: ||U T1 - T2 U|| = {residual:e}")]
    NotIntertwining { residual: f64 },

    #[error("Gram matrices of the spanning sets differ by {residual:e}")]
    GramMismatch { residual: f64 },

    #[error("truncation order {order} too small; need at least {required}")]
    OrderTooSmall { order: usize, required: usize },

    #[error("truncation size {size} too small; need at least {required}")]
    TruncationTooSmall { size: usize, required: usize },

    #[error("seed has length {got}, expected {expected}")]
    SeedLengthMismatch { expected: usize, got: usize },

    #[error("weight at index {index} is not positive")]
    NonPositiveWeight { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
