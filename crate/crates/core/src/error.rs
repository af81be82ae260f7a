use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol '{name}' at byte {offset}")]
    UnknownSymbol { name: String, offset: usize },
    #[error("coordinate z{index} at byte {offset} is out of range for a chart of dimension {n}")]
    IndexOutOfRange { index: usize, n: usize, offset: usize },
    #[error("parameter '{0}' is not bound")]
    UnboundParameter(String),
    #[error("{func} is undefined at {point:?}")]
    Domain { func: String, point: Vec<Complex64> },
    #[error("point has {got} coordinates, expression needs {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("malformed config: {0}")]
    Config(String),
    #[error("metric entry ({row},{col}): {source}")]
    Entry {
        row: usize,
        col: usize,
        source: ExprError,
    },
    #[error("field component {index}: {source}")]
    FieldComponent { index: usize, source: ExprError },
    #[error("metric is not Hermitian at {point:?}: |g_ab - conj(g_ba)| = {defect:e}")]
    NotHermitian { point: Vec<Complex64>, defect: f64 },
    #[error("metric is not positive definite at {point:?} (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite {
        point: Vec<Complex64>,
        min_eigenvalue: f64,
    },
    #[error("metric is singular at {point:?} (condition number {condition:e})")]
    Singular { point: Vec<Complex64>, condition: f64 },
    #[error("quadrature grid would have {requested} points, cap is {cap}")]
    GridTooLarge { requested: u128, cap: usize },
    #[error("resolution must be at least 2, got {0}")]
    Resolution(usize),
    #[error("non-finite integrand {value} at {point:?}")]
    NonFinite { point: Vec<Complex64>, value: f64 },
    #[error("finite-difference step {step:e} underflows at coordinate scale {scale:e}")]
    StepUnderflow { step: f64, scale: f64 },
}
