//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A^dagger| = {residual:.3e}")]
    NonHermitian { residual: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {invariant} violated (residual {residual:.3e})")]
    InvalidState { invariant: &'static str, residual: f64 },

    #[error("channel is not trace preserving: max |sum E_i^dagger E_i - I| = {residual:.3e}")]
    NotTracePreserving { residual: f64 },

    #[error("invalid PVM: {invariant} violated (residual {residual:.3e})")]
    InvalidPvm { invariant: &'static str, residual: f64 },

    #[error("invalid classical channel: {invariant} violated (residual {residual:.3e})")]
    InvalidClassicalChannel { invariant: &'static str, residual: f64 },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("alpha = {0} outside the open interval (0, 1)")]
    AlphaOutOfRange(f64),

    #[error("rate r = {r} outside [0, {stein}]")]
    ROutOfRange { r: f64, stein: f64 },

    #[error("a - b = {diff} outside the admissible band [{lo}, {hi}]")]
    AbOutOfRange { diff: f64, lo: f64, hi: f64 },

    #[error("{what} needs {requested}, over the configured cap {cap}")]
    BudgetExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("combination is not positive definite: lambda_min = {lambda_min:.3e}")]
    NotPositive { lambda_min: f64 },

    #[error("unknown example id '{0}' (expected harrow-lambda, harrow-bound, harrow-adaptive, pure-chernoff, depolarizing-fig or amplitude-fig)")]
    UnknownExample(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
