use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::point::dot;
use super::{linalg, GeometryError, Point};
use crate::scalar::Real;

/// Projection of `p` onto the closed segment `[a, b]`: the clamped
/// parameter `t` and the Euclidean distance to `(1 - t) a + t b`.
pub fn segment_projection<T: Real>(
    p: &Point<T>,
    a: &Point<T>,
    b: &Point<T>,
) -> Result<(T, T), GeometryError> {
    a.check_dim(p.dim())?;
    b.check_dim(p.dim())?;
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == T::zero() {
        return Ok((T::zero(), p.distance(a)));
    }
    let t = ((p - a).dot(&ab) / len2).max(T::zero()).min(T::one());
    Ok((t, p.distance(&a.lerp(b, t))))
}

pub fn segment_distance<T: Real>(
    p: &Point<T>,
    a: &Point<T>,
    b: &Point<T>,
) -> Result<T, GeometryError> {
    segment_projection(p, a, b).map(|(_, d)| d)
}

/// Outcome of a min-norm-point solve for `dist(p, co{v_1, ..., v_m})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullDistance<T> {
    /// Distance from `p` to `nearest`; an upper bound on the true distance.
    pub distance: T,
    /// Certified lower bound from the separating hyperplane at `nearest`.
    pub lower_bound: T,
    pub nearest: Point<T>,
    /// Convex weights on the input vertices reproducing `nearest`.
    pub weights: Vec<T>,
    pub iterations: usize,
}

/// Distance from `p` to the convex hull of `vertices` by Wolfe's
/// min-norm-point method: a conditional-gradient vertex oracle combined
/// with exact affine minimization over the active vertex set.
///
/// Returns once `distance - lower_bound <= tol` (or `distance <= tol`),
/// so a converged result is within `tol` of the true distance. Running out
/// of `max_iter` iterations is reported as [`GeometryError::NotConverged`].
pub fn hull_distance<T: Real>(
    p: &Point<T>,
    vertices: &[Point<T>],
    max_iter: usize,
    tol: T,
) -> Result<HullDistance<T>, GeometryError> {
    if vertices.is_empty() {
        return Err(GeometryError::EmptyVertexList);
    }
    for v in vertices {
        v.check_dim(p.dim())?;
    }
    // shift so that p is the origin
    let shifted: Vec<Vec<T>> = vertices.iter().map(|v| (v - p).into_coords()).collect();
    let n = p.dim();

    let start = argmin(shifted.iter().map(|w| dot(w, w)));
    let mut active = vec![start];
    let mut lambda = vec![T::one()];
    let mut x = shifted[start].clone();
    let mut iterations = 0;

    let finish = |x: &[T], lower: T, active: &[usize], lambda: &[T], iterations: usize| {
        let mut weights = vec![T::zero(); vertices.len()];
        for (&i, &l) in active.iter().zip(lambda) {
            weights[i] = l;
        }
        HullDistance {
            distance: dot(x, x).sqrt(),
            lower_bound: lower,
            nearest: Point::from_vec(x.iter().zip(p.coords()).map(|(&a, &b)| a + b).collect()),
            weights,
            iterations,
        }
    };

    loop {
        let norm = dot(&x, &x).sqrt();
        if norm <= tol {
            return Ok(finish(&x, T::zero(), &active, &lambda, iterations));
        }
        let scores: Vec<T> = shifted.iter().map(|w| dot(&x, w)).collect();
        let j = argmin(scores.iter().copied());
        let lower = (scores[j] / norm).max(T::zero());
        if norm - lower <= tol {
            return Ok(finish(&x, lower, &active, &lambda, iterations));
        }
        if active.contains(&j) || iterations >= max_iter {
            return Err(GeometryError::NotConverged {
                distance: norm.to_f64_lossy(),
                lower_bound: lower.to_f64_lossy(),
                iterations,
            });
        }
        active.push(j);
        lambda.push(T::zero());

        loop {
            iterations += 1;
            let mu = affine_min_norm(&shifted, &active).ok_or_else(|| GeometryError::NotConverged {
                distance: norm.to_f64_lossy(),
                lower_bound: lower.to_f64_lossy(),
                iterations,
            })?;
            if mu.iter().all(|&m| m > T::zero()) {
                lambda = mu;
                break;
            }
            // step from lambda toward mu until the first weight hits zero
            let mut theta = T::one();
            let mut blocking = 0;
            for (i, (&l, &m)) in lambda.iter().zip(&mu).enumerate() {
                if m <= T::zero() {
                    let ratio = l / (l - m);
                    if ratio < theta {
                        theta = ratio;
                        blocking = i;
                    }
                }
            }
            for (l, &m) in lambda.iter_mut().zip(&mu) {
                *l = (T::one() - theta) * *l + theta * m;
            }
            lambda[blocking] = T::zero();
            let mut keep = 0;
            for i in 0..active.len() {
                if lambda[i] > T::zero() {
                    active[keep] = active[i];
                    lambda[keep] = lambda[i];
                    keep += 1;
                }
            }
            active.truncate(keep);
            lambda.truncate(keep);
            let total: T = lambda.iter().copied().sum();
            for l in &mut lambda {
                *l = *l / total;
            }
            if iterations >= max_iter {
                break;
            }
        }

        x = vec![T::zero(); n];
        for (&i, &l) in active.iter().zip(&lambda) {
            for (xk, &wk) in x.iter_mut().zip(&shifted[i]) {
                *xk = *xk + l * wk;
            }
        }
    }
}

/// Minimizes `|sum mu_i w_i|` over the affine hull of the active vertices
/// (`sum mu_i = 1`, signs free) via the bordered Gram system.
fn affine_min_norm<T: Real>(points: &[Vec<T>], active: &[usize]) -> Option<Vec<T>> {
    let k = active.len();
    if k == 1 {
        return Some(vec![T::one()]);
    }
    let size = k + 1;
    let mut m = vec![T::zero(); size * size];
    for (r, &i) in active.iter().enumerate() {
        for (c, &j) in active.iter().enumerate() {
            m[r * size + c] = dot(&points[i], &points[j]);
        }
        m[r * size + k] = T::one();
        m[k * size + r] = T::one();
    }
    let mut rhs = vec![T::zero(); size];
    rhs[k] = T::one();
    let mut sol = linalg::solve(m, rhs, T::of(1e-15))?;
    sol.truncate(k);
    Some(sol)
}

fn argmin<T: Real>(values: impl Iterator<Item = T>) -> usize {
    let mut best = 0;
    let mut best_value = T::infinity();
    for (i, v) in values.enumerate() {
        if v < best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

/// A seeded random point of `co(vertices)` with its convex weights
/// (normalized i.i.d. uniforms in `(0, 1]`).
pub fn convex_sample<T: Real>(
    vertices: &[Point<T>],
    seed: u64,
) -> Result<(Point<T>, Vec<T>), GeometryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    convex_sample_with(vertices, &mut rng)
}

pub fn convex_sample_with<T: Real, R: Rng + ?Sized>(
    vertices: &[Point<T>],
    rng: &mut R,
) -> Result<(Point<T>, Vec<T>), GeometryError> {
    let first = vertices.first().ok_or(GeometryError::EmptyVertexList)?;
    for v in vertices {
        v.check_dim(first.dim())?;
    }
    let raw: Vec<f64> = (0..vertices.len()).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let weights: Vec<T> = super::normalize_weights(&raw);
    Ok((super::combine_with_weights(vertices, &weights), weights))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point<f64> {
        Point::from_f64(c).unwrap()
    }

    fn unit_square() -> Vec<Point<f64>> {
        vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0]), pt(&[1.0, 1.0])]
    }

    #[test]
    fn segment_examples() {
        let o = pt(&[0.0, 0.0]);
        let d = pt(&[1.0, 1.0]);
        assert_eq!(segment_distance(&pt(&[0.5, 0.5]), &o, &d).unwrap(), 0.0);
        let (t, dist) = segment_projection(&pt(&[0.125, 0.25]), &o, &d).unwrap();
        assert_eq!(t, 3.0 / 16.0);
        assert!((dist - 2f64.sqrt() / 16.0).abs() < 1e-16);
        assert_eq!(segment_distance(&pt(&[2.0, 0.0]), &o, &o).unwrap(), 2.0);
        assert!(segment_distance(&pt(&[2.0]), &o, &o).is_err());
    }

    #[test]
    fn hull_examples() {
        let sq = unit_square();
        let inside = hull_distance(&pt(&[0.5, 0.5]), &sq, 100, 1e-9).unwrap();
        assert!(inside.distance <= 1e-9);
        let outside = hull_distance(&pt(&[2.0, 0.0]), &sq, 100, 1e-9).unwrap();
        assert!((outside.distance - 1.0).abs() <= 1e-9);
        assert!(outside.lower_bound <= 1.0 + 1e-12);
        let seg = vec![pt(&[0.0, 0.0]), pt(&[1.0, 1.0])];
        let h = hull_distance(&pt(&[0.125, 0.25]), &seg, 100, 1e-9).unwrap();
        assert!((h.distance - 2f64.sqrt() / 16.0).abs() <= 1e-9);
    }

    #[test]
    fn hull_weights_reproduce_nearest_point() {
        let sq = unit_square();
        let h = hull_distance(&pt(&[0.3, 1.7]), &sq, 100, 1e-12).unwrap();
        let total: f64 = h.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        let rebuilt = crate::geometry::combine_with_weights(&sq, &h.weights);
        assert!(rebuilt.distance(&h.nearest) < 1e-14);
        assert!((h.nearest[0] - 0.3).abs() < 1e-12 && (h.nearest[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hull_errors() {
        assert_eq!(
            hull_distance::<f64>(&pt(&[0.0]), &[], 10, 1e-9),
            Err(GeometryError::EmptyVertexList)
        );
        assert!(matches!(
            hull_distance(&pt(&[0.0]), &unit_square(), 10, 1e-9),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hull_non_convergence_is_signalled() {
        // many near-coplanar vertices around a far point with zero iterations
        let verts: Vec<Point<f64>> = (0..50)
            .map(|i| {
                let a = i as f64 * 0.1;
                pt(&[a.cos(), a.sin(), 0.0])
            })
            .collect();
        let r = hull_distance(&pt(&[0.1, 0.2, 3.0]), &verts, 0, 0.0);
        assert!(matches!(r, Err(GeometryError::NotConverged { .. })));
    }

    #[test]
    fn convex_sample_examples() {
        let v = pt(&[0.3, -0.2]);
        let (p, w) = convex_sample(std::slice::from_ref(&v), 9).unwrap();
        assert_eq!(p, v);
        assert_eq!(w, vec![1.0]);
        let (p, w) = convex_sample(&[pt(&[0.0, 0.0]), pt(&[1.0, 0.0])], 4).unwrap();
        assert_eq!(p[1], 0.0);
        assert_eq!(w.iter().sum::<f64>(), 1.0);
        assert!(w.iter().all(|&l| l >= 0.0));
        assert_eq!(convex_sample(&[pt(&[0.0]), pt(&[1.0])], 4).unwrap(), convex_sample(&[pt(&[0.0]), pt(&[1.0])], 4).unwrap());
        assert_eq!(convex_sample::<f64>(&[], 1), Err(GeometryError::EmptyVertexList));
    }
}
