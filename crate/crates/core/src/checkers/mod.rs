//! Sampled falsifiers for the operator classes and for the theorem-level
//! relations between the problem forms.
//!
//! A passing report means no violation was found for the given seed and
//! trial count (or explicit trial list); it is evidence, not proof. A
//! failing report always carries a witness whose slack, recomputed from
//! the witness data with the `*_slack` functions, is below `-tol`.

mod hull;
mod minty;
mod monotone;
mod ql;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::geometry::Point;
use crate::scalar::Real;

pub use hull::{check_hull_image, check_kkm, hull_slack, kkm_slack, HullTrial};
pub use minty::{check_minty_inclusion, InclusionDirection};
pub use monotone::{
    check_a_pseudomonotone, check_monotone_relative, monotone_slack, pseudomonotone_slack,
    PairTrial,
};
pub use ql::{
    check_ql, check_strict_ql, dense_scan_1d, monotonicity_scan, ql_slack, strict_ql_slack,
    MonotonicityScan, SegmentTrial, StrictQlOptions,
};

/// Stable checker identifiers.
pub const PROPERTY_NAMES: &[&str] = &[
    "ql",
    "strict_ql",
    "monotone_relative",
    "a_pseudomonotone",
    "hull_image",
    "kkm",
    "minty",
];

const RANDOM_NOTE: &str =
    "sampled falsifier: pass means no violation was found for this seed and trial count";
const EXPLICIT_NOTE: &str = "explicit trials: pass means every listed trial satisfied the property";

/// Where trials come from.
#[derive(Clone, Debug, PartialEq)]
pub enum Sampling<P> {
    Random { trials: usize, seed: u64 },
    Explicit(Vec<P>),
}

impl<P> Sampling<P> {
    pub fn random(trials: usize, seed: u64) -> Self {
        Sampling::Random { trials, seed }
    }

    pub(crate) fn seed(&self) -> u64 {
        match self {
            Sampling::Random { seed, .. } => *seed,
            Sampling::Explicit(_) => 0,
        }
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            Sampling::Random { trials, .. } => *trials,
            Sampling::Explicit(v) => v.len(),
        }
    }

    pub(crate) fn note(&self) -> &'static str {
        match self {
            Sampling::Random { .. } => RANDOM_NOTE,
            Sampling::Explicit(_) => EXPLICIT_NOTE,
        }
    }
}

/// Counterexample data, sufficient to recompute the slack from scratch.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness<T> {
    /// `A((1-t)x + ty)` is `distance` away from `[A(x), A(y)]`.
    Segment {
        trial: usize,
        x: Point<T>,
        y: Point<T>,
        t: T,
        distance: T,
        slack: T,
    },
    /// `A(z)` is within `endpoint_distance` of `A(x)` or `A(y)`, so not in
    /// the open segment; `degenerate` marks `A(x) = A(y)`.
    OpenSegment {
        trial: usize,
        x: Point<T>,
        y: Point<T>,
        t: T,
        distance: T,
        endpoint_distance: T,
        degenerate: bool,
        slack: T,
    },
    Pair {
        trial: usize,
        x: Point<T>,
        y: Point<T>,
        value: T,
        slack: T,
    },
    Hull {
        trial: usize,
        points: Vec<Point<T>>,
        weights: Vec<T>,
        x: Point<T>,
        distance: T,
        slack: T,
    },
    Kkm {
        trial: usize,
        points: Vec<Point<T>>,
        weights: Vec<T>,
        x: Point<T>,
        max_lhs: T,
        slack: T,
    },
    Inclusion {
        x: Point<T>,
        gap_is: T,
        gap_im: T,
        slack: T,
    },
    EvaluationFailure {
        trial: usize,
        points: Vec<Point<T>>,
        message: String,
    },
}

impl<T: Real> Witness<T> {
    /// Measured slack; violations have `slack < -tol`.
    pub fn slack(&self) -> T {
        match self {
            Witness::Segment { slack, .. }
            | Witness::OpenSegment { slack, .. }
            | Witness::Pair { slack, .. }
            | Witness::Hull { slack, .. }
            | Witness::Kkm { slack, .. }
            | Witness::Inclusion { slack, .. } => *slack,
            Witness::EvaluationFailure { .. } => T::neg_infinity(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport<T> {
    pub property: String,
    pub trials: usize,
    pub passed: bool,
    pub witness: Option<Witness<T>>,
    pub tol: T,
    pub seed: u64,
    /// Pseudomonotonicity trials whose antecedent did not hold.
    pub vacuous: usize,
    /// Strict-ql trials with `A(x) = A(y)` (empty open segment).
    pub degenerate: usize,
    pub note: String,
    pub stats: BTreeMap<String, f64>,
    pub hypotheses: Vec<HypothesisCheck>,
}

impl<T: Real> PropertyReport<T> {
    pub(crate) fn new<P>(property: &str, sampling: &Sampling<P>, tol: T) -> Self {
        Self {
            property: property.to_string(),
            trials: 0,
            passed: true,
            witness: None,
            tol,
            seed: sampling.seed(),
            vacuous: 0,
            degenerate: 0,
            note: sampling.note().to_string(),
            stats: BTreeMap::new(),
            hypotheses: Vec::new(),
        }
    }

    pub(crate) fn fail(&mut self, witness: Witness<T>) {
        self.passed = false;
        self.witness = Some(witness);
    }
}

pub(crate) fn eval_failure<T: Real>(trial: usize, points: Vec<Point<T>>, err: crate::Error) -> Witness<T> {
    Witness::EvaluationFailure {
        trial,
        points,
        message: err.to_string(),
    }
}
