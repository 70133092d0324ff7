//! Generalized variational inequalities on compact convex subsets of R^n.
//!
//! An instance pairs an operator `A` with a map `a` on a convex set `K`.
//! Four problem forms are supported (see [`VIKind`]); each is solved by
//! minimizing a sampled gap over a lattice of `K`. The [`checkers`] module
//! holds sampled falsifiers for the operator classes the existence results
//! rely on.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the bottom of this file fix the scalar.

// `!(v >= 0)` style tests are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checkers;
pub mod error;
pub mod exprlang;
pub mod geometry;
pub mod operators;
pub mod scalar;
pub mod solvers;
pub mod vi_core;

pub use error::{Error, Result};
pub use geometry::{ConvexSet, GeometryError, Point, SampleGrid};
pub use operators::VectorField;
pub use scalar::Real;
pub use solvers::{SolveReport, Verdict};
pub use vi_core::{GapReport, VIInstance, VIKind};

pub type Point64 = Point<f64>;
pub type ConvexSet64 = ConvexSet<f64>;
pub type SampleGrid64 = SampleGrid<f64>;
pub type VectorField64 = VectorField<f64>;
pub type VIInstance64 = VIInstance<f64>;
pub type GapReport64 = GapReport<f64>;
pub type SolveReport64 = SolveReport<f64>;
pub type PropertyReport64 = checkers::PropertyReport<f64>;

pub type Point32 = Point<f32>;
pub type ConvexSet32 = ConvexSet<f32>;
pub type SampleGrid32 = SampleGrid<f32>;
pub type VectorField32 = VectorField<f32>;
pub type VIInstance32 = VIInstance<f32>;
pub type GapReport32 = GapReport<f32>;
pub type SolveReport32 = SolveReport<f32>;
pub type PropertyReport32 = checkers::PropertyReport<f32>;
