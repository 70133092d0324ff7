use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::VectorField;
use crate::error::{Error, Result};
use crate::geometry::ConvexSet;
use crate::scalar::Real;

/// Closed-form operators from the worked counterexamples, plus the
/// trivial fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogField {
    /// `(x, y) ↦ (x²y, xy)` on `[-1, 1]²`; not of type ql.
    Ex432Operator,
    /// `(x, y) ↦ (1, -x)`.
    Ex432Map,
    /// Tent-shaped, non-monotone piecewise-linear operator on `[-1, 1]`.
    Ex434Operator,
    /// Piecewise-linear map on `[-1, 1]` with a kink at `1/2`.
    Ex434Map,
    /// Unit step: `-1` on `[-1, 0)`, `1` on `[0, 1]`; ql but not strict ql.
    Ex4331Operator,
    /// `x ↦ x`.
    Ex4331Map,
    Zero(usize),
}

impl CatalogField {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogField::Ex432Operator => "ex432_A",
            CatalogField::Ex432Map => "ex432_a",
            CatalogField::Ex434Operator => "ex434_A",
            CatalogField::Ex434Map => "ex434_a",
            CatalogField::Ex4331Operator => "ex4331_A",
            CatalogField::Ex4331Map => "ex4331_a",
            CatalogField::Zero(_) => "zero",
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            CatalogField::Ex432Operator | CatalogField::Ex432Map => (2, 2),
            CatalogField::Zero(n) => (*n, *n),
            _ => (1, 1),
        }
    }

    pub(crate) fn eval<T: Real>(&self, p: &[T]) -> Vec<T> {
        let c = T::of;
        match self {
            CatalogField::Ex432Operator => {
                let (x, y) = (p[0], p[1]);
                vec![x.powi(2) * y, x * y]
            }
            CatalogField::Ex432Map => vec![T::one(), -p[0]],
            CatalogField::Ex434Operator => {
                let x = p[0];
                vec![if x <= c(-0.5) {
                    c(-2.0) * x - T::one()
                } else if x <= T::zero() {
                    c(2.0) * x + T::one()
                } else {
                    c(-2.0) * x + T::one()
                }]
            }
            CatalogField::Ex434Map => {
                let x = p[0];
                vec![if x <= c(0.5) {
                    c(-2.0) / c(3.0) * x + T::one() / c(3.0)
                } else {
                    c(-2.0) * x + T::one()
                }]
            }
            CatalogField::Ex4331Operator => vec![if p[0] < T::zero() { -T::one() } else { T::one() }],
            CatalogField::Ex4331Map => vec![p[0]],
            CatalogField::Zero(n) => vec![T::zero(); *n],
        }
    }

    /// Independent expression-language encoding of the same formula.
    pub fn sources(&self) -> Vec<String> {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect();
        match self {
            CatalogField::Ex432Operator => s(&["x^2*y", "x*y"]),
            CatalogField::Ex432Map => s(&["1", "-x"]),
            CatalogField::Ex434Operator => {
                s(&["piecewise(x <= -1/2 -> -2*x - 1, x <= 0 -> 2*x + 1, else -> -2*x + 1)"])
            }
            CatalogField::Ex434Map => s(&["piecewise(x <= 1/2 -> -2/3*x + 1/3, else -> -2*x + 1)"]),
            CatalogField::Ex4331Operator => s(&["piecewise(x < 0 -> -1, else -> 1)"]),
            CatalogField::Ex4331Map => s(&["x"]),
            CatalogField::Zero(n) => vec!["0".to_string(); *n],
        }
    }
}

/// A named field with its home domain.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry<T> {
    pub name: String,
    pub field: VectorField<T>,
    pub domain: ConvexSet<T>,
    pub description: &'static str,
    /// Expression-language re-encoding of `field`, one source per component.
    pub sources: Vec<String>,
}

/// Stable catalog identifiers.
pub const CATALOG_NAMES: &[&str] = &[
    "ex432_A",
    "ex432_a",
    "ex434_A",
    "ex434_a",
    "ex4331_A",
    "ex4331_a",
    "identity",
    "zero",
    "affine_random",
];

/// Looks up a catalog entry. `dim` must match fixed-dimension entries and
/// sizes `identity`, `zero` and `affine_random`; `seed` only affects
/// `affine_random`.
pub fn catalog_lookup<T: Real>(name: &str, dim: usize, seed: u64) -> Result<CatalogEntry<T>> {
    let fixed = |field: CatalogField, description: &'static str| -> Result<CatalogEntry<T>> {
        let (d, _) = field.dims();
        if d != dim {
            return Err(Error::CatalogDimension {
                name: name.to_string(),
                dim: d,
                requested: dim,
            });
        }
        Ok(CatalogEntry {
            name: name.to_string(),
            field: VectorField::catalog(field),
            domain: ConvexSet::cube(d, -1.0, 1.0)?,
            description,
            sources: field.sources(),
        })
    };
    if dim == 0 {
        return Err(Error::InvalidArgument("catalog dimension must be positive".into()));
    }
    match name {
        "ex432_A" => fixed(
            CatalogField::Ex432Operator,
            "operator of the inverted Stampacchia problem on the square that has no solution",
        ),
        "ex432_a" => fixed(CatalogField::Ex432Map, "companion map (1, -x) of ex432_A"),
        "ex434_A" => fixed(
            CatalogField::Ex434Operator,
            "non-monotone operator whose inverted Minty solution -1/2 does not solve inverted Stampacchia",
        ),
        "ex434_a" => fixed(CatalogField::Ex434Map, "companion map of ex434_A"),
        "ex4331_A" => fixed(
            CatalogField::Ex4331Operator,
            "ql but not strict-ql step operator separating inverted Minty from inverted Stampacchia",
        ),
        "ex4331_a" => fixed(CatalogField::Ex4331Map, "identity map on [-1, 1] paired with ex4331_A"),
        "identity" => Ok(CatalogEntry {
            name: name.into(),
            field: VectorField::identity(dim),
            domain: ConvexSet::cube(dim, -1.0, 1.0)?,
            description: "identity map",
            sources: (1..=dim).map(|i| format!("x{i}")).collect(),
        }),
        "zero" => Ok(CatalogEntry {
            name: name.into(),
            field: VectorField::zero(dim),
            domain: ConvexSet::cube(dim, -1.0, 1.0)?,
            description: "zero field",
            sources: CatalogField::Zero(dim).sources(),
        }),
        "affine_random" => {
            let (rows, offset) = random_affine_coefficients(dim, dim, seed);
            let sources = affine_sources(&rows, &offset);
            Ok(CatalogEntry {
                name: name.into(),
                field: VectorField::affine(
                    rows.iter().map(|r| r.iter().map(|&v| T::of(v)).collect()).collect(),
                    offset.iter().map(|&v| T::of(v)).collect(),
                )?,
                domain: ConvexSet::cube(dim, -1.0, 1.0)?,
                description: "seeded affine field, coefficients uniform on [-1, 1]",
                sources,
            })
        }
        _ => Err(Error::UnknownCatalogEntry {
            name: name.to_string(),
            available: CATALOG_NAMES.join(", "),
        }),
    }
}

fn random_affine_coefficients(rows: usize, cols: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect();
    let b = (0..rows).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    (m, b)
}

fn affine_sources(rows: &[Vec<f64>], offset: &[f64]) -> Vec<String> {
    rows.iter()
        .zip(offset)
        .map(|(row, b)| {
            let terms: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(j, m)| format!("({m:?})*x{}", j + 1))
                .collect();
            format!("{} + ({b:?})", terms.join(" + "))
        })
        .collect()
}

/// `x ↦ M x + b` with entries of `M` and `b` uniform on `[-1, 1]`.
pub fn affine_random<T: Real>(dim: usize, seed: u64) -> Result<VectorField<T>> {
    catalog_lookup("affine_random", dim, seed).map(|e| e.field)
}

/// `A = M ∘ inner` with `M = RᵀR` positive semidefinite (`R` seeded
/// uniform on `[-1, 1]`), so `A` is monotone relative to `inner`.
pub fn affine_psd_pullback<T: Real>(inner: VectorField<T>, seed: u64) -> Result<VectorField<T>> {
    let n = inner.dim_out();
    let (r, _) = random_affine_coefficients(n, n, seed);
    let m: Vec<Vec<T>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| T::of((0..n).map(|k| r[k][i] * r[k][j]).sum()))
                .collect()
        })
        .collect();
    let outer = VectorField::affine(m, vec![T::zero(); n])?;
    VectorField::compose(outer, inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_grid, Point};

    fn pt(c: &[f64]) -> Point<f64> {
        Point::from_f64(c).unwrap()
    }

    #[test]
    fn paper_values() {
        let a = catalog_lookup::<f64>("ex432_A", 2, 0).unwrap();
        assert_eq!(a.field.evaluate(&pt(&[0.5, 0.5])).unwrap(), pt(&[0.125, 0.25]));
        let m = catalog_lookup::<f64>("ex434_a", 1, 0).unwrap();
        let v = m.field.evaluate(&pt(&[-0.5])).unwrap();
        assert!((v[0] - 2.0 / 3.0).abs() < 1e-16);
        let s = catalog_lookup::<f64>("ex4331_A", 1, 0).unwrap();
        assert_eq!(s.field.evaluate(&pt(&[-1e-9])).unwrap(), pt(&[-1.0]));
        assert_eq!(s.field.evaluate(&pt(&[0.0])).unwrap(), pt(&[1.0]));
        let e = catalog_lookup::<f64>("ex432_a", 2, 0).unwrap();
        assert_eq!(e.field.evaluate(&pt(&[0.3, 0.9])).unwrap(), pt(&[1.0, -0.3]));
        assert_eq!(e.domain, ConvexSet::cube(2, -1.0, 1.0).unwrap());
    }

    #[test]
    fn closed_forms_match_expression_encodings() {
        for name in CATALOG_NAMES {
            for dim in 1..=3 {
                let Ok(entry) = catalog_lookup::<f64>(name, dim, 11) else {
                    continue;
                };
                let reencoded = VectorField::from_sources(&entry.sources, dim).unwrap();
                for p in sample_grid(&entry.domain, 41).unwrap().points() {
                    let a = entry.field.evaluate(p).unwrap();
                    let b = reencoded.evaluate(p).unwrap();
                    for i in 0..a.dim() {
                        assert!((a[i] - b[i]).abs() <= 1e-15, "{name} at {p:?}: {a:?} vs {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn unknown_names_list_alternatives() {
        let err = catalog_lookup::<f64>("nope", 1, 0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("ex432_A") && msg.contains("affine_random"));
        assert!(matches!(
            catalog_lookup::<f64>("ex432_A", 1, 0),
            Err(Error::CatalogDimension { .. })
        ));
    }

    #[test]
    fn psd_pullback_is_monotone_relative() {
        let inner = catalog_lookup::<f64>("ex432_a", 2, 0).unwrap().field;
        let a = affine_psd_pullback(inner.clone(), 5).unwrap();
        let grid = sample_grid(&ConvexSet::cube(2, -1.0, 1.0).unwrap(), 7).unwrap();
        for x in grid.points() {
            for y in grid.points() {
                let da = &a.evaluate(x).unwrap() - &a.evaluate(y).unwrap();
                let dm = &inner.evaluate(x).unwrap() - &inner.evaluate(y).unwrap();
                assert!(da.dot(&dm) >= -1e-12);
            }
        }
    }

    #[test]
    fn identity_lookup() {
        let e = catalog_lookup::<f64>("identity", 2, 0).unwrap();
        assert_eq!(e.field, VectorField::identity(2));
    }
}
