use serde::Serialize;

use crate::error::{Error, Result};
use crate::exprlang::Expr;
use crate::geometry::Point;
use crate::scalar::Real;

use super::catalog::CatalogField;

/// How a [`VectorField`] computes its value.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldBody<T> {
    Catalog(CatalogField),
    Componentwise(Vec<Expr>),
    Identity,
    /// `matrix * p + offset`, matrix row-major `dim_out x dim_in`.
    Affine { matrix: Vec<T>, offset: Vec<T> },
    /// `p - F(p)`.
    IdentityMinus(Box<VectorField<T>>),
    /// `outer(inner(p))`.
    Compose {
        outer: Box<VectorField<T>>,
        inner: Box<VectorField<T>>,
    },
}

/// A map `R^dim_in -> R^dim_out`; holds both the operator `A` and the map
/// `a` of a variational inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<T> {
    dim_in: usize,
    dim_out: usize,
    body: FieldBody<T>,
}

impl<T: Real> VectorField<T> {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            body: FieldBody::Identity,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::catalog(CatalogField::Zero(dim))
    }

    pub fn catalog(entry: CatalogField) -> Self {
        let (dim_in, dim_out) = entry.dims();
        Self {
            dim_in,
            dim_out,
            body: FieldBody::Catalog(entry),
        }
    }

    /// `rows` is `dim_out` rows of length `dim_in`.
    pub fn affine(rows: Vec<Vec<T>>, offset: Vec<T>) -> Result<Self> {
        let dim_out = rows.len();
        let dim_in = rows.first().map_or(0, Vec::len);
        if dim_out == 0 || dim_in == 0 {
            return Err(Error::InvalidArgument("affine field needs a nonempty matrix".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim_in) {
            return Err(Error::DimensionMismatch {
                expected: dim_in,
                found: bad.len(),
            });
        }
        if offset.len() != dim_out {
            return Err(Error::DimensionMismatch {
                expected: dim_out,
                found: offset.len(),
            });
        }
        let matrix: Vec<T> = rows.into_iter().flatten().collect();
        if matrix.iter().chain(&offset).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("affine coefficients must be finite".into()));
        }
        Ok(Self {
            dim_in,
            dim_out,
            body: FieldBody::Affine { matrix, offset },
        })
    }

    /// One expression per output coordinate, all over `dim_in` variables.
    pub fn componentwise(components: Vec<Expr>, dim_in: usize) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("componentwise field needs a component".into()));
        }
        if let Some(bad) = components.iter().find(|e| e.dim() != dim_in) {
            return Err(Error::DimensionMismatch {
                expected: dim_in,
                found: bad.dim(),
            });
        }
        Ok(Self {
            dim_in,
            dim_out: components.len(),
            body: FieldBody::Componentwise(components),
        })
    }

    /// Parses one component expression per output coordinate.
    pub fn from_sources<S: AsRef<str>>(sources: &[S], dim_in: usize) -> Result<Self> {
        let exprs = sources
            .iter()
            .map(|s| Expr::parse(s.as_ref(), dim_in))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::componentwise(exprs, dim_in)
    }

    /// `p - f(p)`.
    pub fn identity_minus(f: VectorField<T>) -> Result<Self> {
        if f.dim_in != f.dim_out {
            return Err(Error::DimensionMismatch {
                expected: f.dim_in,
                found: f.dim_out,
            });
        }
        Ok(Self {
            dim_in: f.dim_in,
            dim_out: f.dim_out,
            body: FieldBody::IdentityMinus(Box::new(f)),
        })
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: VectorField<T>, inner: VectorField<T>) -> Result<Self> {
        if outer.dim_in != inner.dim_out {
            return Err(Error::DimensionMismatch {
                expected: outer.dim_in,
                found: inner.dim_out,
            });
        }
        Ok(Self {
            dim_in: inner.dim_in,
            dim_out: outer.dim_out,
            body: FieldBody::Compose {
                outer: Box::new(outer),
                inner: Box::new(inner),
            },
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn body(&self) -> &FieldBody<T> {
        &self.body
    }

    pub fn evaluate(&self, p: &Point<T>) -> Result<Point<T>> {
        if p.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                found: p.dim(),
            });
        }
        let coords = self.raw(p.coords())?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { at: p.to_f64_vec() });
        }
        Ok(Point::from_vec(coords))
    }

    fn raw(&self, p: &[T]) -> Result<Vec<T>> {
        Ok(match &self.body {
            FieldBody::Catalog(entry) => entry.eval(p),
            FieldBody::Identity => p.to_vec(),
            FieldBody::Componentwise(exprs) => exprs
                .iter()
                .map(|e| {
                    e.eval_slice(p).map_err(|source| Error::Eval {
                        at: p.iter().map(|c| c.to_f64_lossy()).collect(),
                        source,
                    })
                })
                .collect::<Result<_>>()?,
            FieldBody::Affine { matrix, offset } => (0..self.dim_out)
                .map(|i| {
                    let row = &matrix[i * self.dim_in..(i + 1) * self.dim_in];
                    row.iter()
                        .zip(p)
                        .fold(T::zero(), |acc, (&m, &x)| acc + m * x)
                        + offset[i]
                })
                .collect(),
            FieldBody::IdentityMinus(f) => {
                let fp = f.raw(p)?;
                p.iter().zip(fp).map(|(&x, y)| x - y).collect()
            }
            FieldBody::Compose { outer, inner } => outer.raw(&inner.raw(p)?)?,
        })
    }
}

/// Compact description used in reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldSummary {
    pub kind: String,
    pub dim_in: usize,
    pub dim_out: usize,
}

impl<T: Real> From<&VectorField<T>> for FieldSummary {
    fn from(f: &VectorField<T>) -> Self {
        let kind = match &f.body {
            FieldBody::Catalog(c) => c.name().to_string(),
            FieldBody::Componentwise(es) => {
                let parts: Vec<String> = es.iter().map(ToString::to_string).collect();
                format!("expr[{}]", parts.join("; "))
            }
            FieldBody::Identity => "identity".into(),
            FieldBody::Affine { .. } => "affine".into(),
            FieldBody::IdentityMinus(inner) => format!("id-({})", FieldSummary::from(&**inner).kind),
            FieldBody::Compose { outer, inner } => format!(
                "({})∘({})",
                FieldSummary::from(&**outer).kind,
                FieldSummary::from(&**inner).kind
            ),
        };
        FieldSummary {
            kind,
            dim_in: f.dim_in,
            dim_out: f.dim_out,
        }
    }
}
