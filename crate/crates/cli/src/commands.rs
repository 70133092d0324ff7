use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use varineq::checkers::{
    check_a_pseudomonotone, check_hull_image, check_kkm, check_minty_inclusion, check_monotone_relative,
    check_ql, check_strict_ql, dense_scan_1d, monotonicity_scan, HullTrial, InclusionDirection, PairTrial,
    Sampling, SegmentTrial, StrictQlOptions, PROPERTY_NAMES,
};
use varineq::solvers::{brouwer_fixed_point, gap_field, nonexistence_certificate, refine, solve_grid};
use varineq::{ConvexSet64, Point64, Verdict};

use crate::instance::InstanceFile;
use crate::report::Status;

/// Global command-line overrides of instance settings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub resolution: Option<usize>,
    pub tol: Option<f64>,
}

impl Overrides {
    pub fn resolution(&self, file: &InstanceFile) -> usize {
        self.resolution.unwrap_or(file.solver.resolution)
    }

    pub fn tol(&self, file: &InstanceFile) -> f64 {
        self.tol.unwrap_or(file.solver.tol)
    }

    pub fn seed(&self, file: &InstanceFile) -> u64 {
        self.seed.or(file.seed).unwrap_or(0)
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

/// Grid solve, optional refinement, and a nonexistence certificate when
/// no solution was found and Lipschitz moduli are given.
pub fn solve(file: &InstanceFile, ov: &Overrides) -> Result<(Status, Value)> {
    let instance = file.vi_instance()?;
    let tol = ov.tol(file);
    let coarse = solve_grid(&instance, ov.resolution(file), tol)?;
    let certificate = match (coarse.verdict, file.lipschitz_moduli()) {
        (Verdict::NoSolutionAtResolution, Some(m)) if matches!(instance.set(), ConvexSet64::Box { .. }) => {
            Some(nonexistence_certificate(&instance, &coarse, &m)?)
        }
        _ => None,
    };
    let report = if file.solver.refine_levels > 0 {
        refine(&instance, &coarse, file.solver.refine_levels, file.solver.shrink, tol)?
    } else {
        coarse
    };
    let status = match report.verdict {
        Verdict::SolutionFound => Status::Success,
        Verdict::NoSolutionAtResolution => Status::Negative,
    };
    Ok((status, json!({ "solve": to_value(&report), "certificate": to_value(&certificate) })))
}

/// Checker parameters; unset values take the defaults below.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckParams {
    pub trials: Option<usize>,
    pub t_samples: Option<usize>,
    pub n_points: Option<usize>,
    pub strict_margin: Option<f64>,
    pub direction: Option<String>,
    /// Forced segment or pair trial.
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub t: Option<f64>,
    /// Forced hull/KKM trial.
    pub points: Vec<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
    /// Minty candidates.
    pub candidates: Vec<Vec<f64>>,
    /// Deterministic 1-D scan with this many lattice points (ql, strict_ql).
    pub dense: Option<usize>,
    pub hypothesis_trials: Option<usize>,
}

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_T_SAMPLES: usize = 3;
pub const DEFAULT_N_POINTS: usize = 3;

fn pt(c: &[f64]) -> Result<Point64> {
    Ok(Point64::from_f64(c)?)
}

fn segment_sampling(p: &CheckParams, set: &ConvexSet64, seed: u64) -> Result<Sampling<SegmentTrial<f64>>> {
    if let Some(n) = p.dense {
        return Ok(Sampling::Explicit(dense_scan_1d(set, n)?));
    }
    match (&p.x, &p.y) {
        (Some(x), Some(y)) => {
            let t = p.t.ok_or_else(|| anyhow!("a forced segment trial needs --t"))?;
            Ok(Sampling::Explicit(vec![SegmentTrial::new(pt(x)?, pt(y)?, t)]))
        }
        (None, None) => Ok(Sampling::random(p.trials.unwrap_or(DEFAULT_TRIALS), seed)),
        _ => bail!("a forced trial needs both --x and --y"),
    }
}

fn pair_sampling(p: &CheckParams, seed: u64) -> Result<Sampling<PairTrial<f64>>> {
    match (&p.x, &p.y) {
        (Some(x), Some(y)) => Ok(Sampling::Explicit(vec![PairTrial::new(pt(x)?, pt(y)?)])),
        (None, None) => Ok(Sampling::random(p.trials.unwrap_or(DEFAULT_TRIALS), seed)),
        _ => bail!("a forced pair needs both --x and --y"),
    }
}

fn hull_sampling(p: &CheckParams, seed: u64) -> Result<Sampling<HullTrial<f64>>> {
    if p.points.is_empty() {
        return Ok(Sampling::random(p.trials.unwrap_or(DEFAULT_TRIALS), seed));
    }
    let points: Vec<Point64> = p.points.iter().map(|c| pt(c)).collect::<Result<_>>()?;
    let weights = match &p.weights {
        Some(w) => w.clone(),
        None => vec![1.0 / points.len() as f64; points.len()],
    };
    Ok(Sampling::Explicit(vec![HullTrial::new(points, weights)?]))
}

/// Runs the named checker against the instance's fields and set.
pub fn check(file: &InstanceFile, property: &str, p: &CheckParams, ov: &Overrides) -> Result<(Status, Value)> {
    let set = file.build_set()?;
    let tol = ov.tol(file);
    let seed = ov.seed(file);
    let n_points = p.n_points.unwrap_or(DEFAULT_N_POINTS);
    let t_samples = p.t_samples.unwrap_or(DEFAULT_T_SAMPLES);
    let mut extra = Value::Null;
    let report = match property {
        "ql" => {
            let op = file.operator()?;
            if let Some(n) = p.dense {
                extra = to_value(&monotonicity_scan(&op, &set, n)?);
            }
            check_ql(&op, &set, &segment_sampling(p, &set, seed)?, t_samples, tol)?
        }
        "strict_ql" => {
            let opts = StrictQlOptions {
                t_samples,
                tol,
                strict_margin: p.strict_margin.unwrap_or(0.0),
            };
            check_strict_ql(&file.operator()?, &set, &segment_sampling(p, &set, seed)?, opts)?
        }
        "monotone_relative" => {
            check_monotone_relative(&file.operator()?, &file.map()?, &set, &pair_sampling(p, seed)?, tol)?
        }
        "a_pseudomonotone" => {
            check_a_pseudomonotone(&file.operator()?, &file.map()?, &set, &pair_sampling(p, seed)?, tol)?
        }
        "hull_image" => check_hull_image(&file.operator()?, &set, n_points, &hull_sampling(p, seed)?, tol)?,
        "kkm" => check_kkm(&file.operator()?, &file.map()?, &set, n_points, &hull_sampling(p, seed)?, tol)?,
        "minty" => {
            let name = p
                .direction
                .as_deref()
                .ok_or_else(|| anyhow!("minty needs --direction iS_subset_iM or iM_subset_iS"))?;
            let direction = InclusionDirection::parse(name)
                .ok_or_else(|| anyhow!("unknown direction `{name}`; expected iS_subset_iM or iM_subset_iS"))?;
            let candidates: Vec<Point64> = p.candidates.iter().map(|c| pt(c)).collect::<Result<_>>()?;
            check_minty_inclusion(
                &file.operator()?,
                &file.map()?,
                &set,
                ov.resolution(file),
                tol,
                direction,
                (!candidates.is_empty()).then_some(candidates.as_slice()),
                p.hypothesis_trials.unwrap_or(0),
                seed,
            )?
        }
        other => bail!("unknown property `{other}`; available: {}", PROPERTY_NAMES.join(", ")),
    };
    let status = Status::from_pass(report.passed);
    Ok((status, json!({ "report": to_value(&report), "monotonicity_scan": extra })))
}

/// Fixed point of the instance's `F`; success iff the residual is within
/// tolerance.
pub fn fixed_point(file: &InstanceFile, ov: &Overrides) -> Result<(Status, Value)> {
    let f = file.self_map()?;
    let set = file.build_set()?;
    let tol = ov.tol(file);
    let report = brouwer_fixed_point(&f, &set, ov.resolution(file), file.solver.refine_levels, tol)?;
    Ok((Status::from_pass(report.residual <= tol), to_value(&report)))
}

/// Writes one CSV row per grid point: coordinates, gap, worst test point.
pub fn export_gap_field(file: &InstanceFile, out: &Path, ov: &Overrides) -> Result<(Status, Value)> {
    let n = file.dimension;
    if n > 3 {
        bail!("gap-field export supports dimension at most 3, instance has {n}");
    }
    let instance = file.vi_instance()?;
    let rows = gap_field(&instance, ov.resolution(file), ov.tol(file))?;
    let mut w = csv::Writer::from_path(out).with_context(|| format!("cannot write {}", out.display()))?;
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("gap".into());
    header.extend((1..=n).map(|i| format!("worst_y{i}")));
    w.write_record(&header)?;
    for r in &rows {
        let mut rec: Vec<String> = r.x.coords().iter().map(|v| v.to_string()).collect();
        rec.push(r.gap.to_string());
        rec.extend(r.worst_y.coords().iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().with_context(|| format!("cannot write {}", out.display()))?;
    Ok((
        Status::Success,
        json!({ "rows": rows.len(), "columns": header, "path": out.display().to_string() }),
    ))
}
