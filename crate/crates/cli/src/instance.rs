//! Instance files: a JSON description of a problem, its solver settings and
//! optional extras (Lipschitz moduli, a self-map `F` for fixed points).

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use varineq::exprlang::Expr;
use varineq::operators::{affine_psd_pullback, catalog_lookup};
use varineq::solvers::LipschitzModuli;
use varineq::{ConvexSet64, Point64, VIInstance64, VIKind, VectorField64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Simplex { vertices: Vec<Vec<f64>> },
    Hull { vertices: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Catalog {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Expr { components: Vec<String> },
    Affine { matrix: Vec<Vec<f64>>, offset: Vec<f64> },
    /// `R^T R` applied after `inner`, `R` seeded.
    PsdPullback { inner: Box<FieldSpec>, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub resolution: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub refine_levels: usize,
    #[serde(default = "default_shrink")]
    pub shrink: f64,
}

fn default_tol() -> f64 {
    1e-9
}

fn default_shrink() -> f64 {
    0.5
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            resolution: 41,
            tol: default_tol(),
            refine_levels: 0,
            shrink: default_shrink(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LipschitzSpec {
    #[serde(rename = "L_A")]
    pub l_a_op: f64,
    #[serde(rename = "L_a")]
    pub l_a_map: f64,
    #[serde(rename = "bound_A", default, skip_serializing_if = "Option::is_none")]
    pub bound_op: Option<f64>,
    #[serde(rename = "bound_a", default, skip_serializing_if = "Option::is_none")]
    pub bound_map: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dimension: usize,
    pub set: SetSpec,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<FieldSpec>,
    #[serde(rename = "a", default, skip_serializing_if = "Option::is_none")]
    pub map: Option<FieldSpec>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub self_map: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<LipschitzSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| anyhow!("invalid instance file: {e}"))?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Canonical form: pretty JSON in declaration order, absent options
    /// omitted, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    /// SHA-256 of the canonical form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_canonical_json().as_bytes()))
    }

    /// Builds every declared component once to surface schema and
    /// dimension errors early.
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            bail!("dimension must be positive");
        }
        let set = self.build_set()?;
        if set.dim() != self.dimension {
            bail!("set has dimension {}, instance declares {}", set.dim(), self.dimension);
        }
        for (label, spec) in [("A", &self.operator), ("a", &self.map), ("F", &self.self_map)] {
            if let Some(spec) = spec {
                let f = build_field(spec, self.dimension).with_context(|| format!("field {label}"))?;
                if f.dim_in() != self.dimension || f.dim_out() != self.dimension {
                    bail!(
                        "field {label} maps R^{} to R^{}, expected R^{}",
                        f.dim_in(),
                        f.dim_out(),
                        self.dimension
                    );
                }
            }
        }
        if let Some(p) = &self.problem {
            parse_kind(p)?;
        }
        if self.solver.resolution < 2 {
            bail!("solver.resolution must be at least 2");
        }
        if !(self.solver.tol >= 0.0) {
            bail!("solver.tol must be non-negative");
        }
        Ok(())
    }

    pub fn build_set(&self) -> Result<ConvexSet64> {
        build_set(&self.set)
    }

    pub fn operator(&self) -> Result<VectorField64> {
        let spec = self.operator.as_ref().ok_or_else(|| anyhow!("instance has no operator `A`"))?;
        build_field(spec, self.dimension)
    }

    pub fn map(&self) -> Result<VectorField64> {
        let spec = self.map.as_ref().ok_or_else(|| anyhow!("instance has no map `a`"))?;
        build_field(spec, self.dimension)
    }

    pub fn self_map(&self) -> Result<VectorField64> {
        let spec = self.self_map.as_ref().ok_or_else(|| anyhow!("instance has no self-map `F`"))?;
        build_field(spec, self.dimension)
    }

    pub fn kind(&self) -> Result<VIKind> {
        parse_kind(self.problem.as_deref().ok_or_else(|| anyhow!("instance has no `problem`"))?)
    }

    pub fn vi_instance(&self) -> Result<VIInstance64> {
        Ok(VIInstance64::new(self.kind()?, self.operator()?, self.map()?, self.build_set()?)?)
    }

    pub fn lipschitz_moduli(&self) -> Option<LipschitzModuli<f64>> {
        self.lipschitz.as_ref().map(|l| LipschitzModuli {
            operator: l.l_a_op,
            map: l.l_a_map,
            operator_bound: l.bound_op,
            map_bound: l.bound_map,
        })
    }
}

pub fn parse_kind(s: &str) -> Result<VIKind> {
    VIKind::parse(s).ok_or_else(|| anyhow!("unknown problem `{s}`; expected one of S, M, iS, iM"))
}

fn point(coords: &[f64]) -> Result<Point64> {
    Ok(Point64::from_f64(coords)?)
}

pub fn build_set(spec: &SetSpec) -> Result<ConvexSet64> {
    Ok(match spec {
        SetSpec::Box { lower, upper } => ConvexSet64::new_box(point(lower)?, point(upper)?)?,
        SetSpec::Ball { center, radius } => ConvexSet64::new_ball(point(center)?, *radius)?,
        SetSpec::Simplex { vertices } => {
            ConvexSet64::new_simplex(vertices.iter().map(|v| point(v)).collect::<Result<_>>()?)?
        }
        SetSpec::Hull { vertices } => {
            ConvexSet64::new_hull(vertices.iter().map(|v| point(v)).collect::<Result<_>>()?)?
        }
    })
}

pub fn build_field(spec: &FieldSpec, dim: usize) -> Result<VectorField64> {
    Ok(match spec {
        FieldSpec::Catalog { name, seed } => catalog_lookup(name, dim, seed.unwrap_or(0))?.field,
        FieldSpec::Expr { components } => {
            let exprs = components
                .iter()
                .enumerate()
                .map(|(i, src)| Expr::parse(src, dim).with_context(|| format!("component {} `{src}`", i + 1)))
                .collect::<Result<Vec<_>>>()?;
            VectorField64::componentwise(exprs, dim)?
        }
        FieldSpec::Affine { matrix, offset } => VectorField64::affine(matrix.clone(), offset.clone())?,
        FieldSpec::PsdPullback { inner, seed } => affine_psd_pullback(build_field(inner, dim)?, *seed)?,
    })
}
