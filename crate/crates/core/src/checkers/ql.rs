use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{eval_failure, PropertyReport, Sampling, Witness};
use crate::error::{Error, Result};
use crate::geometry::{sample_grid, segment_distance, ConvexSet, Point};
use crate::operators::VectorField;
use crate::scalar::Real;

/// One explicit `(x, y, t)` trial, `z = (1 - t) x + t y`.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentTrial<T> {
    pub x: Point<T>,
    pub y: Point<T>,
    pub t: T,
}

impl<T: Real> SegmentTrial<T> {
    pub fn new(x: Point<T>, y: Point<T>, t: T) -> Self {
        Self { x, y, t }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrictQlOptions<T> {
    pub t_samples: usize,
    pub tol: T,
    /// `A(z)` must stay farther than this (and than `tol`) from both
    /// endpoint images.
    pub strict_margin: T,
}

struct SegmentValues<T> {
    ax: Point<T>,
    ay: Point<T>,
    az: Point<T>,
}

fn segment_values<T: Real>(op: &VectorField<T>, trial: &SegmentTrial<T>) -> Result<SegmentValues<T>> {
    let z = trial.x.lerp(&trial.y, trial.t);
    Ok(SegmentValues {
        ax: op.evaluate(&trial.x)?,
        ay: op.evaluate(&trial.y)?,
        az: op.evaluate(&z)?,
    })
}

/// `-dist(A(z), [A(x), A(y)])`; the segment condition fails when this is
/// below `-tol`.
pub fn ql_slack<T: Real>(op: &VectorField<T>, x: &Point<T>, y: &Point<T>, t: T) -> Result<T> {
    let v = segment_values(op, &SegmentTrial::new(x.clone(), y.clone(), t))?;
    Ok(-segment_distance(&v.az, &v.ax, &v.ay)?)
}

struct StrictOutcome<T> {
    distance: T,
    endpoint_distance: T,
    degenerate: bool,
    slack: T,
}

fn strict_outcome<T: Real>(v: &SegmentValues<T>, tol: T, margin: T) -> Result<StrictOutcome<T>> {
    let distance = segment_distance(&v.az, &v.ax, &v.ay)?;
    let endpoint_distance = v.az.distance(&v.ax).min(v.az.distance(&v.ay));
    let degenerate = v.ax.distance(&v.ay) <= tol;
    let open = endpoint_distance - margin.max(tol) - tol;
    let slack = if distance > tol { -distance } else { open.min(-distance) };
    Ok(StrictOutcome {
        distance,
        endpoint_distance,
        degenerate,
        slack,
    })
}

/// Slack of the open-segment condition: `-dist` when `A(z)` leaves the
/// closed segment, otherwise the clearance from the nearer endpoint image
/// beyond `max(margin, tol)`, shifted by `-tol`.
pub fn strict_ql_slack<T: Real>(
    op: &VectorField<T>,
    x: &Point<T>,
    y: &Point<T>,
    t: T,
    tol: T,
    strict_margin: T,
) -> Result<T> {
    let v = segment_values(op, &SegmentTrial::new(x.clone(), y.clone(), t))?;
    Ok(strict_outcome(&v, tol, strict_margin)?.slack)
}

fn interior_ts<T: Real>(t_samples: usize) -> Vec<T> {
    let denom = (t_samples + 1) as f64;
    (1..=t_samples).map(|k| T::of(k as f64 / denom)).collect()
}

fn validate<T: Real>(op: &VectorField<T>, set: &ConvexSet<T>, t_samples: usize, tol: T) -> Result<()> {
    if t_samples == 0 {
        return Err(Error::InvalidArgument("t_samples must be at least 1".into()));
    }
    if !(tol >= T::zero()) {
        return Err(Error::InvalidArgument("tol must be non-negative".into()));
    }
    if op.dim_in() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: op.dim_in(),
        });
    }
    Ok(())
}

/// Expands the sampling into a flat list of `(trial index, trial)`.
fn segment_trials<T: Real>(
    set: &ConvexSet<T>,
    sampling: &Sampling<SegmentTrial<T>>,
    t_samples: usize,
    distinct: bool,
) -> Result<Vec<(usize, SegmentTrial<T>)>> {
    match sampling {
        Sampling::Explicit(list) => {
            for tr in list {
                if distinct && tr.x == tr.y {
                    return Err(Error::InvalidArgument("strict ql trials need x != y".into()));
                }
            }
            Ok(list.iter().cloned().enumerate().collect())
        }
        Sampling::Random { trials, seed } => {
            if *trials == 0 {
                return Err(Error::InvalidArgument("trials must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let ts = interior_ts::<T>(t_samples);
            let mut out = Vec::with_capacity(trials * ts.len());
            for k in 0..*trials {
                let x = set.sample(&mut rng);
                let mut y = set.sample(&mut rng);
                while distinct && y == x {
                    y = set.sample(&mut rng);
                }
                for &t in &ts {
                    out.push((k, SegmentTrial::new(x.clone(), y.clone(), t)));
                }
            }
            Ok(out)
        }
    }
}

/// Sampled check of the segment condition `A(z) in [A(x), A(y)]`.
pub fn check_ql<T: Real>(
    op: &VectorField<T>,
    set: &ConvexSet<T>,
    sampling: &Sampling<SegmentTrial<T>>,
    t_samples: usize,
    tol: T,
) -> Result<PropertyReport<T>> {
    validate(op, set, t_samples, tol)?;
    let mut report = PropertyReport::new("ql", sampling, tol);
    report.trials = sampling.len();
    let mut failures = 0usize;
    for (k, tr) in segment_trials(set, sampling, t_samples, false)? {
        let outcome = segment_values(op, &tr)
            .and_then(|v| Ok(segment_distance(&v.az, &v.ax, &v.ay)?));
        let witness = match outcome {
            Ok(d) if d <= tol => continue,
            Ok(d) => Witness::Segment {
                trial: k,
                x: tr.x,
                y: tr.y,
                t: tr.t,
                distance: d,
                slack: -d,
            },
            Err(e) => eval_failure(k, vec![tr.x, tr.y], e),
        };
        failures += 1;
        if report.witness.is_none() {
            report.fail(witness);
        }
    }
    report.stats.insert("failures".into(), failures as f64);
    Ok(report)
}

/// Sampled check of the open-segment condition `A(z) in (A(x), A(y))`.
///
/// Trials with `A(x) = A(y)` (within `tol`) have an empty open segment.
/// They are counted in `degenerate` and never pass; if `A(z)` also equals
/// the common value the closed condition holds and only openness fails.
pub fn check_strict_ql<T: Real>(
    op: &VectorField<T>,
    set: &ConvexSet<T>,
    sampling: &Sampling<SegmentTrial<T>>,
    options: StrictQlOptions<T>,
) -> Result<PropertyReport<T>> {
    let StrictQlOptions {
        t_samples,
        tol,
        strict_margin,
    } = options;
    validate(op, set, t_samples, tol)?;
    if !(strict_margin >= T::zero()) {
        return Err(Error::InvalidArgument("strict_margin must be non-negative".into()));
    }
    let mut report = PropertyReport::new("strict_ql", sampling, tol);
    report.trials = sampling.len();
    let mut failures = 0usize;
    for (k, tr) in segment_trials(set, sampling, t_samples, true)? {
        let outcome = segment_values(op, &tr).and_then(|v| strict_outcome(&v, tol, strict_margin));
        let witness = match outcome {
            Ok(o) => {
                if o.degenerate && o.distance <= tol {
                    report.degenerate += 1;
                }
                if o.slack >= -tol {
                    continue;
                }
                Witness::OpenSegment {
                    trial: k,
                    x: tr.x,
                    y: tr.y,
                    t: tr.t,
                    distance: o.distance,
                    endpoint_distance: o.endpoint_distance,
                    degenerate: o.degenerate,
                    slack: o.slack,
                }
            }
            Err(e) => eval_failure(k, vec![tr.x, tr.y], e),
        };
        failures += 1;
        if report.witness.is_none() {
            report.fail(witness);
        }
    }
    report.stats.insert("failures".into(), failures as f64);
    Ok(report)
}

fn interval_bounds<T: Real>(set: &ConvexSet<T>) -> Result<(T, T)> {
    if set.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: set.dim(),
        });
    }
    let (lo, hi) = set.bounding_box();
    Ok((lo[0], hi[0]))
}

/// Deterministic trials for a 1-D field over the `n_points` lattice
/// `x_0 < ... < x_{n-1}` of an interval: `(x_0, x_j, t = (j-1)/j)`, so that
/// `z = x_{j-1}` up to rounding. All of them pass iff the lattice values
/// are monotone.
pub fn dense_scan_1d<T: Real>(set: &ConvexSet<T>, n_points: usize) -> Result<Vec<SegmentTrial<T>>> {
    interval_bounds(set)?;
    let grid = sample_grid(set, n_points)?;
    let pts = grid.points();
    Ok((2..pts.len())
        .map(|j| {
            let t = T::of((j - 1) as f64 / j as f64);
            SegmentTrial::new(pts[0].clone(), pts[j].clone(), t)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct MonotonicityScan {
    pub points: usize,
    pub nondecreasing: bool,
    pub nonincreasing: bool,
    /// First `i` where the sign of `A(x_{i+1}) - A(x_i)` contradicts an
    /// earlier strict step.
    pub first_violation: Option<usize>,
}

impl MonotonicityScan {
    pub fn monotone(&self) -> bool {
        self.nondecreasing || self.nonincreasing
    }
}

/// Sign-constancy of consecutive differences of a scalar field on the
/// `n_points` lattice of an interval.
pub fn monotonicity_scan<T: Real>(
    op: &VectorField<T>,
    set: &ConvexSet<T>,
    n_points: usize,
) -> Result<MonotonicityScan> {
    interval_bounds(set)?;
    if op.dim_out() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: op.dim_out(),
        });
    }
    let grid = sample_grid(set, n_points)?;
    let values: Vec<T> = grid
        .points()
        .iter()
        .map(|p| op.evaluate(p).map(|v| v[0]))
        .collect::<Result<_>>()?;
    let mut up = false;
    let mut down = false;
    let mut first_violation = None;
    for (i, w) in values.windows(2).enumerate() {
        if w[1] > w[0] {
            up = true;
        } else if w[1] < w[0] {
            down = true;
        }
        if up && down && first_violation.is_none() {
            first_violation = Some(i);
        }
    }
    Ok(MonotonicityScan {
        points: values.len(),
        nondecreasing: !down,
        nonincreasing: !up,
        first_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::catalog_lookup;

    fn pt(c: &[f64]) -> Point<f64> {
        Point::from_f64(c).unwrap()
    }

    #[test]
    fn ex432_forced_trial() {
        let e = catalog_lookup::<f64>("ex432_A", 2, 0).unwrap();
        let trial = SegmentTrial::new(pt(&[0.0, 0.0]), pt(&[1.0, 1.0]), 0.5);
        let r = check_ql(&e.field, &e.domain, &Sampling::Explicit(vec![trial]), 1, 1e-9).unwrap();
        assert!(!r.passed);
        let w = r.witness.unwrap();
        assert!((w.slack() + 2f64.sqrt() / 16.0).abs() < 1e-12);
    }

    #[test]
    fn ex4331_endpoint_hit() {
        let e = catalog_lookup::<f64>("ex4331_A", 1, 0).unwrap();
        let trial = SegmentTrial::new(pt(&[-1.0]), pt(&[1.0]), 0.25);
        let opts = StrictQlOptions {
            t_samples: 1,
            tol: 1e-9,
            strict_margin: 0.0,
        };
        let r = check_strict_ql(&e.field, &e.domain, &Sampling::Explicit(vec![trial]), opts).unwrap();
        assert!(!r.passed);
        assert!(r.witness.unwrap().slack() < -1e-9);
    }

    #[test]
    fn constant_field_is_degenerate() {
        let set = ConvexSet::<f64>::cube(2, -1.0, 1.0).unwrap();
        let op = VectorField::affine(vec![vec![0.0, 0.0]; 2], vec![1.0, 2.0]).unwrap();
        let opts = StrictQlOptions {
            t_samples: 3,
            tol: 1e-9,
            strict_margin: 0.0,
        };
        let r = check_strict_ql(&op, &set, &Sampling::random(10, 1), opts).unwrap();
        assert!(!r.passed);
        assert_eq!(r.degenerate, 30);
        assert!(matches!(r.witness, Some(Witness::OpenSegment { degenerate: true, .. })));
    }

    #[test]
    fn scan_trials_cover_lattice() {
        let set = ConvexSet::<f64>::interval(-1.0, 1.0).unwrap();
        let trials = dense_scan_1d(&set, 5).unwrap();
        assert_eq!(trials.len(), 3);
        let z = trials[2].x.lerp(&trials[2].y, trials[2].t);
        assert!((z[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_t_samples_rejected() {
        let set = ConvexSet::<f64>::interval(0.0, 1.0).unwrap();
        let op = VectorField::identity(1);
        assert!(check_ql(&op, &set, &Sampling::random(1, 0), 0, 1e-9).is_err());
    }
}
