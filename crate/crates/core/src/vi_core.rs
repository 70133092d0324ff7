//! The four variational-inequality forms and their sampled gap functions.
//!
//! With operator `A` and map `a` over `K`, a point `x` solves
//!
//! | kind | inequality, for all `y in K` |
//! |------|------------------------------|
//! | `S`  | `<A(x), a(y) - a(x)> >= 0`   |
//! | `iS` | `<A(y) - A(x), a(x)> >= 0`   |
//! | `M`  | `<A(y), a(y) - a(x)> >= 0`   |
//! | `iM` | `<A(y) - A(x), a(y)> >= 0`   |
//!
//! The inverted forms equal the plain forms with the roles of `A` and `a`
//! exchanged; [`inequality_lhs`] computes identical dot products for both.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{sample_grid, ConvexSet, Point, SampleGrid, EXACT_TOL};
use crate::operators::VectorField;
use crate::scalar::Real;

/// Solution tolerance used when checking analytically known points.
pub const ANALYTIC_TOL: f64 = 1e-9;
/// Multiplier in the default tolerance `0.05 * h * magnitude` for points
/// located by grid search.
pub const SEARCH_TOL_FACTOR: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VIKind {
    S,
    M,
    #[serde(rename = "iS")]
    IS,
    #[serde(rename = "iM")]
    IM,
}

impl VIKind {
    pub const ALL: [VIKind; 4] = [VIKind::S, VIKind::M, VIKind::IS, VIKind::IM];

    pub fn as_str(&self) -> &'static str {
        match self {
            VIKind::S => "S",
            VIKind::M => "M",
            VIKind::IS => "iS",
            VIKind::IM => "iM",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for VIKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A variational inequality `(kind, A, a, K)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VIInstance<T> {
    kind: VIKind,
    operator: VectorField<T>,
    map: VectorField<T>,
    set: ConvexSet<T>,
}

impl<T: Real> VIInstance<T> {
    /// `operator` is `A`, `map` is `a`; both must map `R^n -> R^n` where
    /// `n = dim(set)`.
    pub fn new(
        kind: VIKind,
        operator: VectorField<T>,
        map: VectorField<T>,
        set: ConvexSet<T>,
    ) -> Result<Self> {
        let n = set.dim();
        for d in [operator.dim_in(), operator.dim_out(), map.dim_in(), map.dim_out()] {
            if d != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: d,
                });
            }
        }
        Ok(Self {
            kind,
            operator,
            map,
            set,
        })
    }

    pub fn kind(&self) -> VIKind {
        self.kind
    }

    pub fn operator(&self) -> &VectorField<T> {
        &self.operator
    }

    pub fn map(&self) -> &VectorField<T> {
        &self.map
    }

    pub fn set(&self) -> &ConvexSet<T> {
        &self.set
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    pub fn with_kind(&self, kind: VIKind) -> Self {
        Self {
            kind,
            ..self.clone()
        }
    }
}

fn dot<T: Real>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

fn diff<T: Real>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(&a, &b)| a - b).collect()
}

/// Left-hand side from precomputed values `A(x), a(x), A(y), a(y)`.
pub fn lhs_from_values<T: Real>(kind: VIKind, ax_op: &[T], ax_map: &[T], ay_op: &[T], ay_map: &[T]) -> T {
    match kind {
        VIKind::S => dot(ax_op, &diff(ay_map, ax_map)),
        VIKind::IS => dot(&diff(ay_op, ax_op), ax_map),
        VIKind::M => dot(ay_op, &diff(ay_map, ax_map)),
        VIKind::IM => dot(&diff(ay_op, ax_op), ay_map),
    }
}

/// The inequality's left-hand side at `(x, y)`; `x` solves the problem iff
/// this is non-negative for every `y` in the set.
pub fn inequality_lhs<T: Real>(
    kind: VIKind,
    operator: &VectorField<T>,
    map: &VectorField<T>,
    x: &Point<T>,
    y: &Point<T>,
) -> Result<T> {
    let (ax, mx) = (operator.evaluate(x)?, map.evaluate(x)?);
    let (ay, my) = (operator.evaluate(y)?, map.evaluate(y)?);
    if ax.dim() != mx.dim() {
        return Err(Error::DimensionMismatch {
            expected: ax.dim(),
            found: mx.dim(),
        });
    }
    Ok(lhs_from_values(kind, ax.coords(), mx.coords(), ay.coords(), my.coords()))
}

/// Sampled gap at `x`: the largest violation `-lhs(x, y)` over the samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport<T> {
    pub x: Point<T>,
    pub gap: T,
    pub worst_y: Point<T>,
    pub worst_index: usize,
    pub samples: usize,
    pub resolution: usize,
    pub tol: T,
    pub is_solution: bool,
}

/// Field values on a fixed sample set, evaluated once and reused for every
/// candidate `x`.
#[derive(Clone, Debug)]
pub struct FieldTable<T> {
    grid: SampleGrid<T>,
    op_values: Vec<Vec<T>>,
    map_values: Vec<Vec<T>>,
}

impl<T: Real> FieldTable<T> {
    pub fn new(instance: &VIInstance<T>, grid: SampleGrid<T>) -> Result<Self> {
        let values: Vec<(Vec<T>, Vec<T>)> = grid
            .points()
            .par_iter()
            .map(|p| {
                Ok((
                    instance.operator.evaluate(p)?.into_coords(),
                    instance.map.evaluate(p)?.into_coords(),
                ))
            })
            .collect::<Result<_>>()?;
        let (op_values, map_values) = values.into_iter().unzip();
        Ok(Self {
            grid,
            op_values,
            map_values,
        })
    }

    pub fn grid(&self) -> &SampleGrid<T> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn values(&self, i: usize) -> (&[T], &[T]) {
        (&self.op_values[i], &self.map_values[i])
    }

    /// Maximum violation over the table for a candidate whose field values
    /// are `(op_x, map_x)`. Returns `(gap, worst index)`, ties to the lowest
    /// index; the gap starts from zero, the self-pair value.
    pub fn max_violation(&self, kind: VIKind, op_x: &[T], map_x: &[T]) -> (T, Option<usize>) {
        let mut best = T::zero();
        let mut worst = None;
        for i in 0..self.len() {
            let v = T::zero() - lhs_from_values(kind, op_x, map_x, &self.op_values[i], &self.map_values[i]);
            if v > best || (worst.is_none() && v == best) {
                best = v;
                worst = Some(i);
            }
        }
        (best, worst)
    }

    /// Gap at the table's own `i`-th point.
    pub fn gap_at_index(&self, kind: VIKind, i: usize) -> (T, usize) {
        let (op, map) = self.values(i);
        let (g, w) = self.max_violation(kind, op, map);
        (g, w.unwrap_or(i))
    }
}

/// Sampled gap of `x` for `kind` over `samples` (with `x` appended if it
/// is not already a sample, so the gap is never negative).
pub fn gap<T: Real>(
    kind: VIKind,
    operator: &VectorField<T>,
    map: &VectorField<T>,
    set: &ConvexSet<T>,
    x: &Point<T>,
    samples: &SampleGrid<T>,
    tol: T,
) -> Result<GapReport<T>> {
    let instance = VIInstance::new(kind, operator.clone(), map.clone(), set.clone())?;
    gap_for(&instance, x, samples, tol)
}

pub fn gap_for<T: Real>(
    instance: &VIInstance<T>,
    x: &Point<T>,
    samples: &SampleGrid<T>,
    tol: T,
) -> Result<GapReport<T>> {
    if !instance.set.contains(x, T::of(EXACT_TOL))? {
        return Err(Error::OutsideSet { at: x.to_f64_vec() });
    }
    let mut grid = samples.clone();
    grid.ensure_point(x);
    let table = FieldTable::new(instance, grid)?;
    gap_from_table(instance.kind, &table, x, instance, tol)
}

pub(crate) fn gap_from_table<T: Real>(
    kind: VIKind,
    table: &FieldTable<T>,
    x: &Point<T>,
    instance: &VIInstance<T>,
    tol: T,
) -> Result<GapReport<T>> {
    let (op_x, map_x) = match table.grid().position(x) {
        Some(i) => {
            let (a, b) = table.values(i);
            (a.to_vec(), b.to_vec())
        }
        None => (
            instance.operator.evaluate(x)?.into_coords(),
            instance.map.evaluate(x)?.into_coords(),
        ),
    };
    let (g, worst) = table.max_violation(kind, &op_x, &map_x);
    let worst_index = worst.or_else(|| table.grid().position(x)).unwrap_or(0);
    Ok(GapReport {
        x: x.clone(),
        gap: g,
        worst_y: table.grid().points()[worst_index].clone(),
        worst_index,
        samples: table.len(),
        resolution: table.grid().resolution(),
        tol,
        is_solution: g <= tol,
    })
}

/// Checks `x` against the instance's grid of the given resolution.
pub fn is_solution<T: Real>(
    instance: &VIInstance<T>,
    x: &Point<T>,
    resolution: usize,
    tol: T,
) -> Result<(bool, GapReport<T>)> {
    let grid = sample_grid(&instance.set, resolution)?;
    let report = gap_for(instance, x, &grid, tol)?;
    Ok((report.is_solution, report))
}

/// Default tolerance for searched points: `0.05 * h * magnitude`.
pub fn search_tolerance<T: Real>(spacing: T, magnitude: T) -> T {
    T::of(SEARCH_TOL_FACTOR) * spacing * magnitude
}
