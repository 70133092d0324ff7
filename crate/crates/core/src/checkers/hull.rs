use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{eval_failure, PropertyReport, Sampling, Witness};
use crate::error::{Error, Result};
use crate::geometry::{convex_sample_with, hull_distance, ConvexSet, GeometryError, Point, DEFAULT_MAX_ITER};
use crate::operators::VectorField;
use crate::scalar::Real;
use crate::vi_core::{lhs_from_values, VIKind};

/// Explicit points with convex weights; `x = sum w_i p_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct HullTrial<T> {
    pub points: Vec<Point<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> HullTrial<T> {
    pub fn new(points: Vec<Point<T>>, weights: Vec<T>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "need one weight per point and at least one point".into(),
            ));
        }
        let total: T = weights.iter().copied().sum();
        if weights.iter().any(|&w| !(w >= T::zero())) || (total - T::one()).abs() > T::of(1e-12) {
            return Err(Error::InvalidArgument("weights must be convex".into()));
        }
        Ok(Self { points, weights })
    }

    pub fn combination(&self) -> Point<T> {
        let n = self.points[0].dim();
        let mut c = vec![T::zero(); n];
        for (p, &w) in self.points.iter().zip(&self.weights) {
            for (ci, &pi) in c.iter_mut().zip(p.coords()) {
                *ci = *ci + w * pi;
            }
        }
        Point::new(c).expect("convex combination of finite points")
    }
}

fn hull_trials<T: Real>(
    set: &ConvexSet<T>,
    n_points: usize,
    sampling: &Sampling<HullTrial<T>>,
) -> Result<Vec<HullTrial<T>>> {
    match sampling {
        Sampling::Explicit(list) => Ok(list.clone()),
        Sampling::Random { trials, seed } => {
            if *trials == 0 {
                return Err(Error::InvalidArgument("trials must be at least 1".into()));
            }
            if n_points == 0 {
                return Err(Error::InvalidArgument("n_points must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*trials)
                .map(|_| {
                    let points: Vec<Point<T>> = (0..n_points).map(|_| set.sample(&mut rng)).collect();
                    let (_, weights) = convex_sample_with(&points, &mut rng)?;
                    Ok(HullTrial { points, weights })
                })
                .collect()
        }
    }
}

fn hull_precision<T: Real>(tol: T) -> T {
    (tol * T::of(0.1)).max(T::epsilon())
}

/// Upper bound on `dist(A(x), co{A(p_i)})`; a min-norm solve that does not
/// converge contributes its current (upper) distance.
fn image_distance<T: Real>(op: &VectorField<T>, trial: &HullTrial<T>, tol: T) -> Result<T> {
    let ax = op.evaluate(&trial.combination())?;
    let images: Vec<Point<T>> = trial.points.iter().map(|p| op.evaluate(p)).collect::<Result<_>>()?;
    match hull_distance(&ax, &images, DEFAULT_MAX_ITER, hull_precision(tol)) {
        Ok(h) => Ok(h.distance),
        Err(GeometryError::NotConverged { distance, .. }) => Ok(T::of(distance)),
        Err(e) => Err(e.into()),
    }
}

/// `-dist(A(x), co{A(p_i)})` for `x = sum w_i p_i`.
pub fn hull_slack<T: Real>(op: &VectorField<T>, points: &[Point<T>], weights: &[T], tol: T) -> Result<T> {
    let trial = HullTrial::new(points.to_vec(), weights.to_vec())?;
    Ok(-image_distance(op, &trial, tol)?)
}

/// `max_i <A(y_i) - A(x), a(x)>` for `x = sum w_i y_i`.
pub fn kkm_slack<T: Real>(op: &VectorField<T>, map: &VectorField<T>, points: &[Point<T>], weights: &[T]) -> Result<T> {
    let trial = HullTrial::new(points.to_vec(), weights.to_vec())?;
    kkm_value(op, map, &trial)
}

fn kkm_value<T: Real>(op: &VectorField<T>, map: &VectorField<T>, trial: &HullTrial<T>) -> Result<T> {
    let x = trial.combination();
    let (ax, mx) = (op.evaluate(&x)?, map.evaluate(&x)?);
    let mut best = T::neg_infinity();
    for y in &trial.points {
        let ay = op.evaluate(y)?;
        let v = lhs_from_values(VIKind::IS, ax.coords(), mx.coords(), ay.coords(), &[]);
        best = best.max(v);
    }
    Ok(best)
}

fn check_dims<T: Real>(f: &VectorField<T>, set: &ConvexSet<T>) -> Result<()> {
    if f.dim_in() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: f.dim_in(),
        });
    }
    Ok(())
}

/// Sampled check that `A(x)` lies in the hull of the images of points
/// whose convex combination is `x`.
pub fn check_hull_image<T: Real>(
    op: &VectorField<T>,
    set: &ConvexSet<T>,
    n_points: usize,
    sampling: &Sampling<HullTrial<T>>,
    tol: T,
) -> Result<PropertyReport<T>> {
    check_dims(op, set)?;
    let mut report = PropertyReport::new("hull_image", sampling, tol);
    let trials = hull_trials(set, n_points, sampling)?;
    report.trials = trials.len();
    let mut failures = 0usize;
    for (k, tr) in trials.into_iter().enumerate() {
        let witness = match image_distance(op, &tr, tol) {
            Ok(d) if d <= tol => continue,
            Ok(d) => Witness::Hull {
                trial: k,
                x: tr.combination(),
                points: tr.points,
                weights: tr.weights,
                distance: d,
                slack: -d,
            },
            Err(e) => eval_failure(k, tr.points, e),
        };
        failures += 1;
        if report.witness.is_none() {
            report.fail(witness);
        }
    }
    report.stats.insert("failures".into(), failures as f64);
    Ok(report)
}

/// Sampled check that a convex combination `x` of `y_1..y_n` lies in some
/// `G(y_i) = {x : <A(y_i) - A(x), a(x)> >= 0}`.
pub fn check_kkm<T: Real>(
    op: &VectorField<T>,
    map: &VectorField<T>,
    set: &ConvexSet<T>,
    n_points: usize,
    sampling: &Sampling<HullTrial<T>>,
    tol: T,
) -> Result<PropertyReport<T>> {
    check_dims(op, set)?;
    check_dims(map, set)?;
    if op.dim_out() != map.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: op.dim_out(),
            found: map.dim_out(),
        });
    }
    let mut report = PropertyReport::new("kkm", sampling, tol);
    let trials = hull_trials(set, n_points, sampling)?;
    report.trials = trials.len();
    let mut failures = 0usize;
    for (k, tr) in trials.into_iter().enumerate() {
        let witness = match kkm_value(op, map, &tr) {
            Ok(v) if v >= -tol => continue,
            Ok(v) => Witness::Kkm {
                trial: k,
                x: tr.combination(),
                points: tr.points,
                weights: tr.weights,
                max_lhs: v,
                slack: v,
            },
            Err(e) => eval_failure(k, tr.points, e),
        };
        failures += 1;
        if report.witness.is_none() {
            report.fail(witness);
        }
    }
    report.stats.insert("failures".into(), failures as f64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{affine_random, catalog_lookup};

    fn pt(c: &[f64]) -> Point<f64> {
        Point::from_f64(c).unwrap()
    }

    #[test]
    fn ex432_hull_violation() {
        let e = catalog_lookup::<f64>("ex432_A", 2, 0).unwrap();
        let trial = HullTrial::new(vec![pt(&[0.0, 0.0]), pt(&[1.0, 1.0])], vec![0.5, 0.5]).unwrap();
        let r = check_hull_image(&e.field, &e.domain, 2, &Sampling::Explicit(vec![trial]), 1e-9).unwrap();
        assert!(!r.passed);
        assert!((r.witness.unwrap().slack() + 2f64.sqrt() / 16.0).abs() < 1e-12);
    }

    #[test]
    fn affine_hull_passes() {
        let set = ConvexSet::<f64>::cube(2, -1.0, 1.0).unwrap();
        let op = affine_random::<f64>(2, 4).unwrap();
        let r = check_hull_image(&op, &set, 4, &Sampling::random(300, 2), 1e-9).unwrap();
        assert!(r.passed, "{:?}", r.witness);
    }

    #[test]
    fn single_point_hull() {
        let e = catalog_lookup::<f64>("ex432_A", 2, 0).unwrap();
        let r = check_hull_image(&e.field, &e.domain, 1, &Sampling::random(20, 0), 1e-9).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn ex432_kkm_witness() {
        let a = catalog_lookup::<f64>("ex432_A", 2, 0).unwrap();
        let m = catalog_lookup::<f64>("ex432_a", 2, 0).unwrap();
        let pts = vec![pt(&[-1.0, -1.0]), pt(&[1.0, -1.0])];
        let v = kkm_slack(&a.field, &m.field, &pts, &[0.5, 0.5]).unwrap();
        assert_eq!(v, -1.0);
    }

    #[test]
    fn equal_points_kkm() {
        let a = catalog_lookup::<f64>("ex432_A", 2, 0).unwrap();
        let m = catalog_lookup::<f64>("ex432_a", 2, 0).unwrap();
        let p = pt(&[0.3, -0.2]);
        let trial = HullTrial::new(vec![p.clone(), p.clone(), p], vec![0.2, 0.3, 0.5]).unwrap();
        let r = check_kkm(&a.field, &m.field, &a.domain, 3, &Sampling::Explicit(vec![trial]), 1e-9).unwrap();
        assert!(r.passed);
    }
}
