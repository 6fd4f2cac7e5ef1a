use thiserror::Error;

use crate::arma::ArmaFit;
use crate::garch::GarchFit;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("non-positive price {value} at index {index}")]
    NonPositivePrice { index: usize, value: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("failed to parse input at row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("ARMA fit did not converge within the iteration budget")]
    ArmaNotConverged(Box<ArmaFit>),

    #[error("GARCH fit did not converge within the iteration budget")]
    GarchNotConverged(Box<GarchFit>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
