use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{eval_failure, PropertyReport, Sampling, Witness};
use crate::error::{Error, Result};
use crate::geometry::{ConvexSet, Point};
use crate::operators::VectorField;
use crate::scalar::Real;
use crate::vi_core::{lhs_from_values, VIKind};

/// An explicit ordered pair `(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairTrial<T> {
    pub x: Point<T>,
    pub y: Point<T>,
}

impl<T: Real> PairTrial<T> {
    pub fn new(x: Point<T>, y: Point<T>) -> Self {
        Self { x, y }
    }
}

fn pairs<T: Real>(set: &ConvexSet<T>, sampling: &Sampling<PairTrial<T>>) -> Result<Vec<PairTrial<T>>> {
    match sampling {
        Sampling::Explicit(list) => Ok(list.clone()),
        Sampling::Random { trials, seed } => {
            if *trials == 0 {
                return Err(Error::InvalidArgument("trials must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok((0..*trials)
                .map(|_| {
                    let x = set.sample(&mut rng);
                    let y = set.sample(&mut rng);
                    PairTrial::new(x, y)
                })
                .collect())
        }
    }
}

fn validate<T: Real>(op: &VectorField<T>, map: &VectorField<T>, set: &ConvexSet<T>) -> Result<()> {
    for f in [op, map] {
        if f.dim_in() != set.dim() {
            return Err(Error::DimensionMismatch {
                expected: set.dim(),
                found: f.dim_in(),
            });
        }
    }
    if op.dim_out() != map.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: op.dim_out(),
            found: map.dim_out(),
        });
    }
    Ok(())
}

type Values<T> = (Point<T>, Point<T>, Point<T>, Point<T>);

fn pair_values<T: Real>(op: &VectorField<T>, map: &VectorField<T>, x: &Point<T>, y: &Point<T>) -> Result<Values<T>> {
    Ok((op.evaluate(x)?, map.evaluate(x)?, op.evaluate(y)?, map.evaluate(y)?))
}

/// `<A(x) - A(y), a(x) - a(y)>`.
pub fn monotone_slack<T: Real>(op: &VectorField<T>, map: &VectorField<T>, x: &Point<T>, y: &Point<T>) -> Result<T> {
    let (ax, mx, ay, my) = pair_values(op, map, x, y)?;
    Ok((&ax - &ay).dot(&(&mx - &my)))
}

/// `(antecedent, consequent)` = `(<A(x), a(y) - a(x)>, <A(y), a(y) - a(x)>)`.
pub fn pseudomonotone_slack<T: Real>(
    op: &VectorField<T>,
    map: &VectorField<T>,
    x: &Point<T>,
    y: &Point<T>,
) -> Result<(T, T)> {
    let (ax, mx, ay, my) = pair_values(op, map, x, y)?;
    Ok((
        lhs_from_values(VIKind::S, ax.coords(), mx.coords(), ay.coords(), my.coords()),
        lhs_from_values(VIKind::M, ax.coords(), mx.coords(), ay.coords(), my.coords()),
    ))
}

pub fn check_monotone_relative<T: Real>(
    op: &VectorField<T>,
    map: &VectorField<T>,
    set: &ConvexSet<T>,
    sampling: &Sampling<PairTrial<T>>,
    tol: T,
) -> Result<PropertyReport<T>> {
    validate(op, map, set)?;
    let mut report = PropertyReport::new("monotone_relative", sampling, tol);
    let mut failures = 0usize;
    let trials = pairs(set, sampling)?;
    report.trials = trials.len();
    for (k, tr) in trials.into_iter().enumerate() {
        let witness = match monotone_slack(op, map, &tr.x, &tr.y) {
            Ok(v) if v >= -tol => continue,
            Ok(v) => Witness::Pair {
                trial: k,
                x: tr.x,
                y: tr.y,
                value: v,
                slack: v,
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

/// Pairs whose antecedent is negative are vacuous and counted in
/// `vacuous`. The antecedent is taken without tolerance, so a pair that
/// passes the relative monotonicity check at `tol` cannot fail here.
/// The witness `value` is the consequent.
pub fn check_a_pseudomonotone<T: Real>(
    op: &VectorField<T>,
    map: &VectorField<T>,
    set: &ConvexSet<T>,
    sampling: &Sampling<PairTrial<T>>,
    tol: T,
) -> Result<PropertyReport<T>> {
    validate(op, map, set)?;
    let mut report = PropertyReport::new("a_pseudomonotone", sampling, tol);
    let mut failures = 0usize;
    let trials = pairs(set, sampling)?;
    report.trials = trials.len();
    for (k, tr) in trials.into_iter().enumerate() {
        let witness = match pseudomonotone_slack(op, map, &tr.x, &tr.y) {
            Ok((ante, _)) if ante < T::zero() => {
                report.vacuous += 1;
                continue;
            }
            Ok((_, cons)) if cons >= -tol => continue,
            Ok((_, cons)) => Witness::Pair {
                trial: k,
                x: tr.x,
                y: tr.y,
                value: cons,
                slack: cons,
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_identity_fails() {
        let set = ConvexSet::<f64>::interval(-1.0, 1.0).unwrap();
        let op = VectorField::affine(vec![vec![-1.0]], vec![0.0]).unwrap();
        let id = VectorField::identity(1);
        let r = check_monotone_relative(&op, &id, &set, &Sampling::random(5, 3), 1e-9).unwrap();
        assert!(!r.passed);
        if let Some(Witness::Pair { x, y, value, .. }) = r.witness {
            assert!((value + (x[0] - y[0]).powi(2)).abs() < 1e-15);
        } else {
            panic!("expected pair witness");
        }
    }

    #[test]
    fn identity_is_monotone_and_pseudomonotone() {
        let set = ConvexSet::<f64>::cube(2, -1.0, 1.0).unwrap();
        let id = VectorField::identity(2);
        let s = Sampling::random(200, 9);
        assert!(check_monotone_relative(&id, &id, &set, &s, 1e-9).unwrap().passed);
        let p = check_a_pseudomonotone(&id, &id, &set, &s, 1e-9).unwrap();
        assert!(p.passed);
        assert!(p.vacuous > 0 && p.vacuous < 200);
    }

    #[test]
    fn vacuous_only() {
        // A = -1, a = id on [0, 1]; antecedent -(y - x) >= 0 fails when y > x
        let set = ConvexSet::<f64>::interval(0.0, 1.0).unwrap();
        let op = VectorField::affine(vec![vec![0.0]], vec![-1.0]).unwrap();
        let id = VectorField::identity(1);
        let list = vec![
            PairTrial::new(Point::from_f64(&[0.1]).unwrap(), Point::from_f64(&[0.9]).unwrap()),
            PairTrial::new(Point::from_f64(&[0.2]).unwrap(), Point::from_f64(&[0.3]).unwrap()),
        ];
        let r = check_a_pseudomonotone(&op, &id, &set, &Sampling::Explicit(list), 1e-9).unwrap();
        assert!(r.passed);
        assert_eq!(r.vacuous, 2);
    }
}
