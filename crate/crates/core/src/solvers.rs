//! Grid-oracle solvers for the variational inequalities and the
//! fixed-point reduction `A = id`, `a = id - F`.
//!
//! No monotonicity is assumed, so there is no descent direction to follow:
//! every grid point is a candidate and every grid point is a test point,
//! `O(N²)` inequality evaluations per solve.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{local_grid, sample_grid, ConvexSet, Point, SampleGrid, EXACT_TOL};
use crate::operators::VectorField;
use crate::scalar::Real;
use crate::vi_core::{gap_from_table, FieldTable, GapReport, VIInstance, VIKind};

/// The first refinement neighbourhood has half-width
/// `INITIAL_RADIUS_CELLS * coarse spacing`.
pub const INITIAL_RADIUS_CELLS: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    SolutionFound,
    NoSolutionAtResolution,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSummary<T> {
    pub level: usize,
    pub radius: T,
    pub best_x: Point<T>,
    pub best_gap: T,
    pub candidates: usize,
    pub universe: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport<T> {
    pub kind: VIKind,
    pub best_x: Point<T>,
    pub best_gap: T,
    pub worst_y: Point<T>,
    pub resolution: usize,
    pub spacing: T,
    pub refinement_levels: usize,
    pub evaluations: u64,
    pub tol: T,
    pub verdict: Verdict,
    /// Level 0 is the coarse solve; later entries are refinement levels.
    pub history: Vec<LevelSummary<T>>,
}

fn verdict<T: Real>(gap: T, tol: T) -> Verdict {
    if gap <= tol {
        Verdict::SolutionFound
    } else {
        Verdict::NoSolutionAtResolution
    }
}

/// Gaps of the candidates `xs` (indices into `table`), in candidate order.
fn candidate_gaps<T: Real>(table: &FieldTable<T>, kind: VIKind, xs: &[usize]) -> Vec<(T, usize)> {
    xs.par_iter().map(|&i| table.gap_at_index(kind, i)).collect()
}

/// Lowest gap, ties to the lowest candidate position.
fn argmin_gap<T: Real>(gaps: &[(T, usize)]) -> usize {
    let mut best = 0;
    for (i, g) in gaps.iter().enumerate() {
        if g.0 < gaps[best].0 {
            best = i;
        }
    }
    best
}

/// Minimizes the sampled gap over `sample_grid(K, resolution)`, using the
/// same grid as the set of test points.
pub fn solve_grid<T: Real>(instance: &VIInstance<T>, resolution: usize, tol: T) -> Result<SolveReport<T>> {
    let grid = sample_grid(instance.set(), resolution)?;
    let spacing = grid.spacing();
    let table = FieldTable::new(instance, grid)?;
    let n = table.len();
    let xs: Vec<usize> = (0..n).collect();
    let gaps = candidate_gaps(&table, instance.kind(), &xs);
    let best = argmin_gap(&gaps);
    let (best_gap, worst) = gaps[best];
    let best_x = table.grid().points()[best].clone();
    Ok(SolveReport {
        kind: instance.kind(),
        best_x: best_x.clone(),
        best_gap,
        worst_y: table.grid().points()[worst].clone(),
        resolution,
        spacing,
        refinement_levels: 0,
        evaluations: (n * n) as u64,
        tol,
        verdict: verdict(best_gap, tol),
        history: vec![LevelSummary {
            level: 0,
            radius: T::zero(),
            best_x,
            best_gap,
            candidates: n,
            universe: n,
        }],
    })
}

/// Sampled gap of every grid point, in grid order.
pub fn gap_field<T: Real>(instance: &VIInstance<T>, resolution: usize, tol: T) -> Result<Vec<GapReport<T>>> {
    let grid = sample_grid(instance.set(), resolution)?;
    let table = FieldTable::new(instance, grid)?;
    let xs: Vec<usize> = (0..table.len()).collect();
    let gaps = candidate_gaps(&table, instance.kind(), &xs);
    Ok(gaps
        .into_iter()
        .enumerate()
        .map(|(i, (g, w))| GapReport {
            x: table.grid().points()[i].clone(),
            gap: g,
            worst_y: table.grid().points()[w].clone(),
            worst_index: w,
            samples: table.len(),
            resolution,
            tol,
            is_solution: g <= tol,
        })
        .collect())
}

/// Re-solves on shrinking neighbourhoods of the current best point.
///
/// Level `l` searches a lattice of `coarse.resolution` points per axis on
/// the box of half-width `2 h shrink^(l-1)` around the previous best point
/// (clipped to `K`), where `h` is the coarse spacing. Test points are the
/// coarse grid together with that local lattice, so a local-only test set
/// cannot certify a spurious solution. Because the test set changes between
/// levels the best gap need not decrease monotonically.
pub fn refine<T: Real>(
    instance: &VIInstance<T>,
    coarse: &SolveReport<T>,
    levels: usize,
    shrink: T,
    tol: T,
) -> Result<SolveReport<T>> {
    if levels == 0 {
        return Err(Error::InvalidArgument("refine needs at least one level".into()));
    }
    if !(shrink > T::zero() && shrink < T::one()) {
        return Err(Error::InvalidArgument("shrink must lie in (0, 1)".into()));
    }
    if coarse.kind != instance.kind() {
        return Err(Error::InvalidArgument("coarse report comes from a different problem kind".into()));
    }
    let coarse_grid = sample_grid(instance.set(), coarse.resolution)?;
    let mut report = coarse.clone();
    let mut radius = T::of(INITIAL_RADIUS_CELLS) * coarse.spacing;
    for level in 1..=levels {
        let local = local_grid(instance.set(), &report.best_x, radius, coarse.resolution)?;
        let (table, xs) = universe_table(instance, &coarse_grid, &local)?;
        let gaps = candidate_gaps(&table, instance.kind(), &xs);
        let best = argmin_gap(&gaps);
        let (best_gap, worst) = gaps[best];
        let best_x = table.grid().points()[xs[best]].clone();
        report.evaluations += (xs.len() * table.len()) as u64;
        report.best_x = best_x.clone();
        report.best_gap = best_gap;
        report.worst_y = table.grid().points()[worst].clone();
        report.refinement_levels = level;
        report.history.push(LevelSummary {
            level,
            radius,
            best_x,
            best_gap,
            candidates: xs.len(),
            universe: table.len(),
        });
        radius = radius * shrink;
    }
    report.tol = tol;
    report.verdict = verdict(report.best_gap, tol);
    Ok(report)
}

fn universe_table<T: Real>(
    instance: &VIInstance<T>,
    coarse: &SampleGrid<T>,
    local: &SampleGrid<T>,
) -> Result<(FieldTable<T>, Vec<usize>)> {
    let mut universe = coarse.clone();
    let xs: Vec<usize> = local.points().iter().map(|p| universe.ensure_point(p)).collect();
    Ok((FieldTable::new(instance, universe)?, xs))
}

/// Gap of `x` against the union of the coarse grid and the local grid
/// around it; used to re-certify a refined point.
pub fn certify<T: Real>(instance: &VIInstance<T>, x: &Point<T>, samples: &SampleGrid<T>, tol: T) -> Result<GapReport<T>> {
    let mut grid = samples.clone();
    grid.ensure_point(x);
    let table = FieldTable::new(instance, grid)?;
    gap_from_table(instance.kind(), &table, x, instance, tol)
}

/// User-supplied Lipschitz moduli (and optional sup-norm bounds) of `A`
/// and `a` over `K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzModuli<T> {
    pub operator: T,
    pub map: T,
    pub operator_bound: Option<T>,
    pub map_bound: Option<T>,
}

/// Lower bound on the continuous gap over a box from a grid solve:
/// every point of `K` lies within `covering_radius` of a grid point and the
/// sampled gap is `lipschitz`-Lipschitz in `x`, so `margin > 0` proves the
/// problem has no solution in `K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonexistenceCertificate<T> {
    pub gap_min: T,
    pub lipschitz: T,
    pub spacing: T,
    pub covering_radius: T,
    /// `gap_min - lipschitz * max(spacing, covering_radius)`.
    pub margin: T,
    pub bounds_estimated: bool,
    pub rigorous: bool,
}

/// Lipschitz modulus in `x`, uniform in `y`, of the inequality's left-hand
/// side given moduli `l_op, l_map` and sup-norm bounds `b_op, b_map`.
pub fn gap_lipschitz<T: Real>(kind: VIKind, l_op: T, l_map: T, b_op: T, b_map: T) -> T {
    let two = T::of(2.0);
    match kind {
        VIKind::S => l_op * two * b_map + b_op * l_map,
        VIKind::IS => l_op * b_map + two * b_op * l_map,
        VIKind::M => b_op * l_map,
        VIKind::IM => l_op * b_map,
    }
}

pub fn nonexistence_certificate<T: Real>(
    instance: &VIInstance<T>,
    coarse: &SolveReport<T>,
    moduli: &LipschitzModuli<T>,
) -> Result<NonexistenceCertificate<T>> {
    let ConvexSet::Box { lower, upper } = instance.set() else {
        return Err(Error::InvalidArgument(
            "nonexistence certificates are implemented for boxes only".into(),
        ));
    };
    let grid = sample_grid(instance.set(), coarse.resolution)?;
    let (b_op, b_map, estimated) = match (moduli.operator_bound, moduli.map_bound) {
        (Some(a), Some(b)) => (a, b, false),
        (given_op, given_map) => {
            let mut max_op = T::zero();
            let mut max_map = T::zero();
            for p in grid.points() {
                max_op = max_op.max(instance.operator().evaluate(p)?.norm());
                max_map = max_map.max(instance.map().evaluate(p)?.norm());
            }
            (given_op.unwrap_or(max_op), given_map.unwrap_or(max_map), true)
        }
    };
    let steps = T::of((coarse.resolution - 1) as f64);
    let half_steps: T = (0..lower.dim())
        .map(|i| {
            let h = (upper[i] - lower[i]) / steps / T::of(2.0);
            h * h
        })
        .sum();
    let covering_radius = half_steps.sqrt();
    let lipschitz = gap_lipschitz(instance.kind(), moduli.operator, moduli.map, b_op, b_map);
    let margin = coarse.history[0].best_gap - lipschitz * coarse.spacing.max(covering_radius);
    Ok(NonexistenceCertificate {
        gap_min: coarse.history[0].best_gap,
        lipschitz,
        spacing: coarse.spacing,
        covering_radius,
        margin,
        bounds_estimated: estimated,
        rigorous: margin > T::zero() && !estimated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointReport<T> {
    pub x: Point<T>,
    pub residual: T,
    /// `|F(x) - x|` at the coarse best point and after each refinement level.
    pub residual_history: Vec<T>,
    pub solve: SolveReport<T>,
}

/// Fixed point of `F: K -> K` as a solution of the inverted Stampacchia
/// problem with `A = id` and `a = id - F`: at a solution `x`, taking
/// `y = F(x)` gives `-|F(x) - x|² >= 0`.
pub fn brouwer_fixed_point<T: Real>(
    f: &VectorField<T>,
    set: &ConvexSet<T>,
    resolution: usize,
    levels: usize,
    tol: T,
) -> Result<FixedPointReport<T>> {
    let n = set.dim();
    if f.dim_in() != n || f.dim_out() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if f.dim_in() != n { f.dim_in() } else { f.dim_out() },
        });
    }
    let grid = sample_grid(set, resolution)?;
    for p in grid.points() {
        let image = f.evaluate(p)?;
        if !set.contains(&image, T::of(EXACT_TOL))? {
            return Err(Error::RangeViolation {
                at: p.to_f64_vec(),
                image: image.to_f64_vec(),
            });
        }
    }
    let instance = VIInstance::new(
        VIKind::IS,
        VectorField::identity(n),
        VectorField::identity_minus(f.clone())?,
        set.clone(),
    )?;
    let residual = |x: &Point<T>| -> Result<T> { Ok(f.evaluate(x)?.distance(x)) };
    let coarse = solve_grid(&instance, resolution, tol)?;
    let solve = if levels > 0 {
        refine(&instance, &coarse, levels, T::of(0.5), tol)?
    } else {
        coarse
    };
    let residual_history = solve
        .history
        .iter()
        .map(|l| residual(&l.best_x))
        .collect::<Result<Vec<T>>>()?;
    Ok(FixedPointReport {
        x: solve.best_x.clone(),
        residual: residual(&solve.best_x)?,
        residual_history,
        solve,
    })
}
