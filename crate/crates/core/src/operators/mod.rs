//! Vector fields `R^n -> R^m` and the catalog of named operators.

mod catalog;
mod field;

pub use catalog::{
    affine_psd_pullback, affine_random, catalog_lookup, CatalogEntry, CatalogField, CATALOG_NAMES,
};
pub use field::{FieldBody, FieldSummary, VectorField};
