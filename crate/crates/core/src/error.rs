use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("degenerate seeds: the Wronskian vanishes identically")]
    DegenerateSeeds,

    #[error("singular at node {index} (x = {x})")]
    Singular { index: usize, x: f64 },

    #[error("zero pivot at row {row} (shift {shift})")]
    ZeroPivot { row: usize, shift: f64 },

    #[error("insufficient decay: boundary magnitude is {ratio:e} of the maximum (limit {limit:e})")]
    DecayViolation { ratio: f64, limit: f64 },

    #[error("truncation M = {m} too small: dropped tail weight {tail:e}")]
    Truncation { m: usize, tail: f64 },

    #[error("{what}: residual {value:e} exceeds tolerance {tolerance:e}")]
    Residual {
        what: String,
        value: f64,
        tolerance: f64,
    },

    #[error("blow-up at x = {x} (|f| = {value:e})")]
    BlowUp { x: f64, value: f64 },

    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
