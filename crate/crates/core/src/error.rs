use thiserror::Error;

/// Errors raised by the numerical and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{op} did not converge after {iterations} iterations")]
    NonConvergence { op: &'static str, iterations: usize },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("numerical instability in {op}: {msg}")]
    NumericalInstability { op: &'static str, msg: String },

    #[error("iterate {value} left the admissible range {range}")]
    Range { value: f64, range: &'static str },

    #[error("operational grid reaches D = {reached} but the horizon is {horizon}; extend the grid")]
    ExtendNeeded { reached: f64, horizon: f64 },

    #[error("cross-check failed for {op}: |{a} - {b}| > {tol}")]
    CrossCheckFailure {
        op: &'static str,
        a: f64,
        b: f64,
        tol: f64,
    },

    #[error("claim model mean {model} does not match configured mean {configured}")]
    ConfigMismatch { model: f64, configured: f64 },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("claim model {0} is not subexponential")]
    NotSubexponential(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    /// Name of the operation that failed, when the variant records one.
    pub fn operation(&self) -> Option<&'static str> {
        match self {
            Error::Domain { op, .. }
            | Error::NonConvergence { op, .. }
            | Error::NumericalInstability { op, .. }
            | Error::CrossCheckFailure { op, .. } => Some(op),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
