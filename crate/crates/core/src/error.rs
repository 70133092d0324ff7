use thiserror::Error;

use crate::exprlang::{EvalError, ParseError};
use crate::geometry::GeometryError;

/// Errors raised by fields, problem instances, solvers and checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("evaluation failed at {at:?}: {source}")]
    Eval {
        at: Vec<f64>,
        #[source]
        source: EvalError,
    },
    #[error("field produced a non-finite value at {at:?}")]
    NonFinite { at: Vec<f64> },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown catalog entry `{name}`; available: {available}")]
    UnknownCatalogEntry { name: String, available: String },
    #[error("catalog entry `{name}` has dimension {dim}, requested {requested}")]
    CatalogDimension {
        name: String,
        dim: usize,
        requested: usize,
    },
    #[error("point {at:?} lies outside the feasible set")]
    OutsideSet { at: Vec<f64> },
    #[error("F maps grid point {at:?} to {image:?}, outside the set")]
    RangeViolation { at: Vec<f64>, image: Vec<f64> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
