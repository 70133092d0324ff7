use std::ops::{Add, Index, Mul, Sub};

use serde::Serialize;

use super::GeometryError;
use crate::scalar::Real;

/// A point of `R^n` with finite coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyPoint);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite(
                coords.iter().map(|c| c.to_f64_lossy()).collect(),
            ));
        }
        Ok(Self { coords })
    }

    pub fn from_f64(coords: &[f64]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&c| T::of(c)).collect())
    }

    /// Builds a point without the finiteness check; used for arithmetic on
    /// already validated points.
    pub(crate) fn from_vec(coords: Vec<T>) -> Self {
        debug_assert!(!coords.is_empty());
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_vec(vec![T::zero(); dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64_lossy()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Self) -> T {
        dot(&self.coords, &other.coords)
    }

    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        (self - other).norm()
    }

    pub fn scale(&self, factor: T) -> Self {
        Self::from_vec(self.coords.iter().map(|&c| c * factor).collect())
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &Self, t: T) -> Self {
        let s = T::one() - t;
        Self::from_vec(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| s * a + t * b)
                .collect(),
        )
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<(), GeometryError> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

impl<T> Index<usize> for Point<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

impl<T: Real> Sub for &Point<T> {
    type Output = Point<T>;

    fn sub(self, rhs: &Point<T>) -> Point<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point::from_vec(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }
}

impl<T: Real> Add for &Point<T> {
    type Output = Point<T>;

    fn add(self, rhs: &Point<T>) -> Point<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point::from_vec(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }
}

impl<T: Real> Mul<T> for &Point<T> {
    type Output = Point<T>;

    fn mul(self, rhs: T) -> Point<T> {
        self.scale(rhs)
    }
}
