use rand::Rng;
use serde::Serialize;

use super::distance::hull_distance;
use super::{linalg, GeometryError, Point, EXACT_TOL};
use crate::scalar::Real;

const CONTAINS_MAX_ITER: usize = 10_000;

/// A nonempty compact convex subset of `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ConvexSet<T> {
    Box { lower: Point<T>, upper: Point<T> },
    Ball { center: Point<T>, radius: T },
    Simplex { vertices: Vec<Point<T>> },
    Hull { vertices: Vec<Point<T>> },
}

impl<T: Real> ConvexSet<T> {
    pub fn new_box(lower: Point<T>, upper: Point<T>) -> Result<Self, GeometryError> {
        lower.check_dim_pair(&upper)?;
        if let Some(axis) = (0..lower.dim()).find(|&i| lower[i] > upper[i]) {
            return Err(GeometryError::InvalidBox { axis });
        }
        Ok(ConvexSet::Box { lower, upper })
    }

    /// `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self, GeometryError> {
        Self::new_box(
            Point::from_f64(&vec![lo; dim])?,
            Point::from_f64(&vec![hi; dim])?,
        )
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self, GeometryError> {
        Self::cube(1, lo, hi)
    }

    pub fn new_ball(center: Point<T>, radius: T) -> Result<Self, GeometryError> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(GeometryError::InvalidRadius(radius.to_f64_lossy()));
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    /// Requires `n + 1` affinely independent vertices in `R^n`.
    pub fn new_simplex(vertices: Vec<Point<T>>) -> Result<Self, GeometryError> {
        let first = vertices.first().ok_or(GeometryError::EmptyVertexList)?;
        let n = first.dim();
        for v in &vertices {
            v.check_dim(n)?;
        }
        if vertices.len() != n + 1 {
            return Err(GeometryError::WrongVertexCount {
                expected: n + 1,
                found: vertices.len(),
            });
        }
        let mut m = Vec::with_capacity(n * n);
        for v in &vertices[1..] {
            m.extend((0..n).map(|i| v[i] - first[i]));
        }
        if linalg::rank(m, n, n, T::of(1e-10)) < n {
            return Err(GeometryError::DegenerateSimplex);
        }
        Ok(ConvexSet::Simplex { vertices })
    }

    pub fn new_hull(vertices: Vec<Point<T>>) -> Result<Self, GeometryError> {
        let first = vertices.first().ok_or(GeometryError::EmptyVertexList)?;
        let n = first.dim();
        for v in &vertices {
            v.check_dim(n)?;
        }
        Ok(ConvexSet::Hull { vertices })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Box { lower, .. } => lower.dim(),
            ConvexSet::Ball { center, .. } => center.dim(),
            ConvexSet::Simplex { vertices } | ConvexSet::Hull { vertices } => vertices[0].dim(),
        }
    }

    /// Axis-aligned bounding box `(lower, upper)`.
    pub fn bounding_box(&self) -> (Point<T>, Point<T>) {
        match self {
            ConvexSet::Box { lower, upper } => (lower.clone(), upper.clone()),
            ConvexSet::Ball { center, radius } => (
                Point::from_vec(center.coords().iter().map(|&c| c - *radius).collect()),
                Point::from_vec(center.coords().iter().map(|&c| c + *radius).collect()),
            ),
            ConvexSet::Simplex { vertices } | ConvexSet::Hull { vertices } => {
                let n = vertices[0].dim();
                let lo = (0..n)
                    .map(|i| vertices.iter().map(|v| v[i]).fold(T::infinity(), T::min))
                    .collect();
                let hi = (0..n)
                    .map(|i| {
                        vertices
                            .iter()
                            .map(|v| v[i])
                            .fold(T::neg_infinity(), T::max)
                    })
                    .collect();
                (Point::from_vec(lo), Point::from_vec(hi))
            }
        }
    }

    /// True iff `p` lies within Euclidean distance `tol` of the set. Hull
    /// membership is decided by the min-norm certificate at precision 1e-12.
    pub fn contains(&self, p: &Point<T>, tol: T) -> Result<bool, GeometryError> {
        p.check_dim(self.dim())?;
        if tol < T::zero() {
            return Err(GeometryError::NegativeTolerance);
        }
        Ok(match self {
            ConvexSet::Box { lower, upper } => {
                let excess: T = (0..p.dim())
                    .map(|i| {
                        let e = (lower[i] - p[i]).max(p[i] - upper[i]).max(T::zero());
                        e * e
                    })
                    .sum();
                excess.sqrt() <= tol
            }
            ConvexSet::Ball { center, radius } => p.distance(center) <= *radius + tol,
            ConvexSet::Simplex { vertices } => match self.barycentric(p) {
                Some(w) if w.iter().all(|&l| l >= T::zero()) => true,
                _ => hull_member(p, vertices, tol)?,
            },
            ConvexSet::Hull { vertices } => hull_member(p, vertices, tol)?,
        })
    }

    /// Barycentric coordinates of `p` for a simplex; `None` for other
    /// variants or a numerically singular simplex.
    pub fn barycentric(&self, p: &Point<T>) -> Option<Vec<T>> {
        let ConvexSet::Simplex { vertices } = self else {
            return None;
        };
        let n = p.dim();
        let v0 = &vertices[0];
        // columns are v_i - v_0
        let mut m = vec![T::zero(); n * n];
        for (j, v) in vertices[1..].iter().enumerate() {
            for i in 0..n {
                m[i * n + j] = v[i] - v0[i];
            }
        }
        let rhs = (0..n).map(|i| p[i] - v0[i]).collect();
        let tail = linalg::solve(m, rhs, T::of(1e-14))?;
        let head = T::one() - tail.iter().copied().sum::<T>();
        let mut w = Vec::with_capacity(n + 1);
        w.push(head);
        w.extend(tail);
        Some(w)
    }

    /// Draws a point of the set. Box, ball and simplex draws are uniform;
    /// hull draws use normalized uniform weights on the vertices.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point<T> {
        match self {
            ConvexSet::Box { lower, upper } => Point::from_vec(
                (0..lower.dim())
                    .map(|i| lower[i] + (upper[i] - lower[i]) * T::of(rng.gen::<f64>()))
                    .collect(),
            ),
            ConvexSet::Ball { center, radius } => {
                let n = center.dim();
                loop {
                    let offset: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    if offset.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
                        return Point::from_vec(
                            (0..n)
                                .map(|i| center[i] + *radius * T::of(offset[i]))
                                .collect(),
                        );
                    }
                }
            }
            ConvexSet::Simplex { vertices } => {
                let raw: Vec<f64> = (0..vertices.len())
                    .map(|_| -(1.0 - rng.gen::<f64>()).ln())
                    .collect();
                super::combine_with_weights(vertices, &super::normalize_weights(&raw))
            }
            ConvexSet::Hull { vertices } => {
                let raw: Vec<f64> = (0..vertices.len()).map(|_| 1.0 - rng.gen::<f64>()).collect();
                super::combine_with_weights(vertices, &super::normalize_weights(&raw))
            }
        }
    }

    /// Vertices for polytope variants and the bounding-box corners otherwise.
    pub fn extreme_points(&self) -> Vec<Point<T>> {
        match self {
            ConvexSet::Simplex { vertices } | ConvexSet::Hull { vertices } => vertices.clone(),
            _ => {
                let (lo, hi) = self.bounding_box();
                let n = lo.dim();
                (0..1usize << n)
                    .map(|mask| {
                        Point::from_vec(
                            (0..n)
                                .map(|i| if mask >> (n - 1 - i) & 1 == 1 { hi[i] } else { lo[i] })
                                .collect(),
                        )
                    })
                    .collect()
            }
        }
    }
}

fn hull_member<T: Real>(p: &Point<T>, vertices: &[Point<T>], tol: T) -> Result<bool, GeometryError> {
    match hull_distance(p, vertices, CONTAINS_MAX_ITER, T::of(EXACT_TOL)) {
        Ok(h) => Ok(h.lower_bound <= tol),
        Err(GeometryError::NotConverged { lower_bound, .. }) => Ok(T::of(lower_bound) <= tol),
        Err(e) => Err(e),
    }
}

impl<T: Real> Point<T> {
    pub(crate) fn check_dim_pair(&self, other: &Self) -> Result<(), GeometryError> {
        other.check_dim(self.dim())
    }
}
