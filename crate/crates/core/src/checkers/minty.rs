use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_monotone_relative, check_strict_ql, HypothesisCheck, PropertyReport, Sampling, StrictQlOptions,
    Witness,
};
use crate::error::{Error, Result};
use crate::geometry::{sample_grid, ConvexSet, Point};
use crate::operators::VectorField;
use crate::scalar::Real;
use crate::vi_core::{FieldTable, VIInstance, VIKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InclusionDirection {
    #[serde(rename = "iS_subset_iM")]
    IsSubsetIm,
    #[serde(rename = "iM_subset_iS")]
    ImSubsetIs,
}

impl InclusionDirection {
    pub fn as_str(&self) -> &'static str {
        match self {
            InclusionDirection::IsSubsetIm => "iS_subset_iM",
            InclusionDirection::ImSubsetIs => "iM_subset_iS",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "iS_subset_iM" => Some(InclusionDirection::IsSubsetIm),
            "iM_subset_iS" => Some(InclusionDirection::ImSubsetIs),
            _ => None,
        }
    }
}

/// Checks the inclusion between the grid-level solution sets of the two
/// inverted forms.
///
/// Both gaps are measured against the `resolution` grid plus any extra
/// `candidates`. Without candidates every grid point is tested; otherwise
/// only the candidates are, in the given order. The witness is the first
/// tested point in the set difference.
///
/// With `hypothesis_trials > 0` the premise of the corresponding inclusion
/// is sample-checked (relative monotonicity, or strict ql of `A`) and
/// recorded in `hypotheses`; the result does not affect `passed`.
#[allow(clippy::too_many_arguments)]
pub fn check_minty_inclusion<T: Real>(
    op: &VectorField<T>,
    map: &VectorField<T>,
    set: &ConvexSet<T>,
    resolution: usize,
    tol: T,
    direction: InclusionDirection,
    candidates: Option<&[Point<T>]>,
    hypothesis_trials: usize,
    seed: u64,
) -> Result<PropertyReport<T>> {
    if let Some(c) = candidates {
        if c.is_empty() {
            return Err(Error::InvalidArgument("candidate list is empty".into()));
        }
    }
    let instance = VIInstance::new(VIKind::IS, op.clone(), map.clone(), set.clone())?;
    let mut grid = sample_grid(set, resolution)?;
    let tested: Vec<usize> = match candidates {
        None => (0..grid.len()).collect(),
        Some(c) => {
            let mut idx = Vec::with_capacity(c.len());
            for p in c {
                if !set.contains(p, T::of(crate::geometry::EXACT_TOL))? {
                    return Err(Error::OutsideSet { at: p.to_f64_vec() });
                }
                idx.push(grid.ensure_point(p));
            }
            idx
        }
    };
    let table = FieldTable::new(&instance, grid)?;
    let gaps: Vec<(T, T)> = tested
        .par_iter()
        .map(|&i| (table.gap_at_index(VIKind::IS, i).0, table.gap_at_index(VIKind::IM, i).0))
        .collect();

    let sampling: Sampling<()> = Sampling::Explicit(Vec::new());
    let mut report = PropertyReport::new("minty", &sampling, tol);
    report.seed = seed;
    report.trials = tested.len();
    let mut in_is = 0usize;
    let mut in_im = 0usize;
    let mut violations = 0usize;
    for (&i, &(g_is, g_im)) in tested.iter().zip(&gaps) {
        let s_is = g_is <= tol;
        let s_im = g_im <= tol;
        in_is += s_is as usize;
        in_im += s_im as usize;
        let bad = match direction {
            InclusionDirection::IsSubsetIm => s_is && !s_im,
            InclusionDirection::ImSubsetIs => s_im && !s_is,
        };
        if bad {
            violations += 1;
            if report.witness.is_none() {
                let slack = match direction {
                    InclusionDirection::IsSubsetIm => -g_im,
                    InclusionDirection::ImSubsetIs => -g_is,
                };
                report.fail(Witness::Inclusion {
                    x: table.grid().points()[i].clone(),
                    gap_is: g_is,
                    gap_im: g_im,
                    slack,
                });
            }
        }
    }
    report.stats.insert("solutions_iS".into(), in_is as f64);
    report.stats.insert("solutions_iM".into(), in_im as f64);
    report.stats.insert("samples".into(), table.len() as f64);
    report.stats.insert("failures".into(), violations as f64);

    let mut note = format!(
        "grid-level inclusion {} at resolution {}",
        direction.as_str(),
        resolution
    );
    if hypothesis_trials > 0 {
        let check = match direction {
            InclusionDirection::IsSubsetIm => {
                let r = check_monotone_relative(op, map, set, &Sampling::random(hypothesis_trials, seed), tol)?;
                HypothesisCheck {
                    name: "monotone_relative".into(),
                    passed: r.passed,
                    trials: r.trials,
                }
            }
            InclusionDirection::ImSubsetIs => {
                let opts = StrictQlOptions {
                    t_samples: 3,
                    tol,
                    strict_margin: T::zero(),
                };
                let r = check_strict_ql(op, set, &Sampling::random(hypothesis_trials, seed), opts)?;
                HypothesisCheck {
                    name: "strict_ql".into(),
                    passed: r.passed,
                    trials: r.trials,
                }
            }
        };
        report.hypotheses.push(check);
    }
    if direction == InclusionDirection::ImSubsetIs {
        note.push_str("; segment continuity of a is not checked");
    }
    report.note = note;
    Ok(report)
}
