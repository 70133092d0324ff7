//! Compact convex sets in `R^n`, deterministic sample grids and the
//! segment / convex-hull distance primitives used by the operator checks.
//!
//! The inner product is the Euclidean dot product throughout, so the dual
//! space is identified with `R^n` itself.

mod distance;
mod grid;
pub(crate) mod linalg;
mod point;
mod set;

use thiserror::Error;

pub use distance::{
    convex_sample, convex_sample_with, hull_distance, segment_distance, segment_projection,
    HullDistance,
};
pub use grid::{local_grid, sample_grid, SampleGrid};
pub use point::Point;
pub use set::ConvexSet;

use crate::scalar::Real;

/// Tolerance for identities that hold exactly up to rounding.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for iteratively computed geometric quantities.
pub const ITERATIVE_TOL: f64 = 1e-9;
/// Iteration cap used by callers that do not choose their own.
pub const DEFAULT_MAX_ITER: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("points need at least one coordinate")]
    EmptyPoint,
    #[error("non-finite coordinates {0:?}")]
    NonFinite(Vec<f64>),
    #[error("box has lower > upper on axis {axis}")]
    InvalidBox { axis: usize },
    #[error("ball radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("simplex in R^n needs {expected} vertices, got {found}")]
    WrongVertexCount { expected: usize, found: usize },
    #[error("simplex vertices are affinely dependent")]
    DegenerateSimplex,
    #[error("vertex list is empty")]
    EmptyVertexList,
    #[error("grid resolution must be at least 2, got {0}")]
    ResolutionTooSmall(usize),
    #[error("tolerance must be non-negative")]
    NegativeTolerance,
    #[error(
        "min-norm point did not converge after {iterations} iterations \
         (distance {distance}, lower bound {lower_bound})"
    )]
    NotConverged {
        distance: f64,
        lower_bound: f64,
        iterations: usize,
    },
}

/// Normalizes non-negative raw weights to sum to one. The last weight
/// absorbs the rounding so that the partial sum closes at one.
pub(crate) fn normalize_weights<T: Real>(raw: &[f64]) -> Vec<T> {
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<T> = raw.iter().map(|&r| T::of(r / total)).collect();
    if let Some((last, head)) = weights.split_last_mut() {
        let partial: T = head.iter().copied().sum();
        *last = (T::one() - partial).max(T::zero());
    }
    weights
}

pub(crate) fn combine_with_weights<T: Real>(vertices: &[Point<T>], weights: &[T]) -> Point<T> {
    let n = vertices[0].dim();
    let mut acc = vec![T::zero(); n];
    for (v, &w) in vertices.iter().zip(weights) {
        for (a, &c) in acc.iter_mut().zip(v.coords()) {
            *a = *a + w * c;
        }
    }
    Point::from_vec(acc)
}
