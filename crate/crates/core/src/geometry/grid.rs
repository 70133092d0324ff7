use serde::Serialize;

use super::{combine_with_weights, ConvexSet, GeometryError, Point};
use crate::scalar::Real;

/// A finite, deterministically ordered sample of a convex set. Serves as
/// the finite stand-in for "for all y in K".
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleGrid<T> {
    points: Vec<Point<T>>,
    resolution: usize,
    #[serde(skip)]
    set: ConvexSet<T>,
}

impl<T: Real> SampleGrid<T> {
    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn set(&self) -> &ConvexSet<T> {
        &self.set
    }

    /// Index of the first point exactly equal to `p`.
    pub fn position(&self, p: &Point<T>) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    /// Returns the index of `p`, appending it first if absent.
    pub fn ensure_point(&mut self, p: &Point<T>) -> usize {
        match self.position(p) {
            Some(i) => i,
            None => {
                self.points.push(p.clone());
                self.points.len() - 1
            }
        }
    }

    /// Appends every point of `other` not already present, keeping order.
    pub fn extend_unique(&mut self, other: &SampleGrid<T>) {
        for p in &other.points {
            self.ensure_point(p);
        }
    }

    /// Largest lattice step of the underlying construction.
    pub fn spacing(&self) -> T {
        lattice_spacing(&self.set, self.resolution)
    }
}

pub(crate) fn lattice_spacing<T: Real>(set: &ConvexSet<T>, resolution: usize) -> T {
    let steps = T::of((resolution.max(2) - 1) as f64);
    match set {
        ConvexSet::Box { .. } | ConvexSet::Ball { .. } => {
            let (lo, hi) = set.bounding_box();
            (0..lo.dim())
                .map(|i| (hi[i] - lo[i]) / steps)
                .fold(T::zero(), T::max)
        }
        ConvexSet::Simplex { vertices } | ConvexSet::Hull { vertices } => {
            let mut longest = T::zero();
            for (i, a) in vertices.iter().enumerate() {
                for b in &vertices[i + 1..] {
                    longest = longest.max(a.distance(b));
                }
            }
            longest / steps
        }
    }
}

fn lattice_coord<T: Real>(lo: T, hi: T, i: usize, resolution: usize) -> T {
    if i + 1 == resolution {
        hi
    } else {
        lo + (hi - lo) * (T::of(i as f64) / T::of((resolution - 1) as f64))
    }
}

/// Box lattice with `resolution` points per axis, last axis varying fastest.
fn box_lattice<T: Real>(lo: &Point<T>, hi: &Point<T>, resolution: usize) -> Vec<Point<T>> {
    let n = lo.dim();
    let axes: Vec<Vec<T>> = (0..n)
        .map(|a| {
            (0..resolution)
                .map(|i| lattice_coord(lo[a], hi[a], i, resolution))
                .collect()
        })
        .collect();
    let total = resolution.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        out.push(Point::from_vec((0..n).map(|a| axes[a][idx[a]]).collect()));
        for a in (0..n).rev() {
            idx[a] += 1;
            if idx[a] < resolution {
                break;
            }
            idx[a] = 0;
        }
    }
    out
}

/// All compositions of `total` into `parts` non-negative integers, in
/// ascending lexicographic order.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=remaining {
            prefix.push(first);
            rec(remaining - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Deterministic lattice sample of `set`.
///
/// * Box: `resolution` points per axis, endpoints included.
/// * Ball: the bounding-box lattice filtered by membership, plus the center.
/// * Simplex / Hull: convex weights with denominator `resolution - 1`
///   mapped through the vertices (so every vertex is present).
pub fn sample_grid<T: Real>(
    set: &ConvexSet<T>,
    resolution: usize,
) -> Result<SampleGrid<T>, GeometryError> {
    if resolution < 2 {
        return Err(GeometryError::ResolutionTooSmall(resolution));
    }
    let points = match set {
        ConvexSet::Box { lower, upper } => box_lattice(lower, upper, resolution),
        ConvexSet::Ball { center, .. } => {
            let (lo, hi) = set.bounding_box();
            let mut pts = Vec::new();
            for p in box_lattice(&lo, &hi, resolution) {
                if set.contains(&p, T::zero())? {
                    pts.push(p);
                }
            }
            if !pts.contains(center) {
                pts.push(center.clone());
            }
            pts
        }
        ConvexSet::Simplex { vertices } | ConvexSet::Hull { vertices } => {
            let denom = T::of((resolution - 1) as f64);
            compositions(resolution - 1, vertices.len())
                .into_iter()
                .map(|c| {
                    let w: Vec<T> = c.iter().map(|&k| T::of(k as f64) / denom).collect();
                    combine_with_weights(vertices, &w)
                })
                .collect()
        }
    };
    Ok(SampleGrid {
        points,
        resolution,
        set: set.clone(),
    })
}

/// Lattice of the box `[center - radius, center + radius]` clipped to the
/// bounding box of `set`, keeping only members of `set`. `center` is always
/// the first point.
pub fn local_grid<T: Real>(
    set: &ConvexSet<T>,
    center: &Point<T>,
    radius: T,
    resolution: usize,
) -> Result<SampleGrid<T>, GeometryError> {
    if resolution < 2 {
        return Err(GeometryError::ResolutionTooSmall(resolution));
    }
    center.check_dim(set.dim())?;
    let (blo, bhi) = set.bounding_box();
    let n = center.dim();
    let lo = Point::from_vec((0..n).map(|i| (center[i] - radius).max(blo[i])).collect());
    let hi = Point::from_vec((0..n).map(|i| (center[i] + radius).min(bhi[i])).collect());
    let mut points = vec![center.clone()];
    for p in box_lattice(&lo, &hi, resolution) {
        if p != *center && set.contains(&p, T::zero())? {
            points.push(p);
        }
    }
    Ok(SampleGrid {
        points,
        resolution,
        set: set.clone(),
    })
}
