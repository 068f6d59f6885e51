//! Built-in scenarios, compiled into the binary from `catalog/*.json`.

use super::Scenario;
use crate::error::{Error, Result};

macro_rules! entries {
    ($($name:literal),* $(,)?) => {
        const ENTRIES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../catalog/", $name, ".json")))),*
        ];
    };
}

entries!(
    "euclidean-flat",
    "sphere-unit",
    "hyperbolic-halfplane",
    "polar-warped",
    "sphere-as-warped",
    "sphere-warped-identities",
    "direct-product-concurrent",
    "grw-static",
    "grw-milne",
    "grw-exponential",
    "grw-affine",
    "thm21-direct-product",
    "thm22-constant-warping",
    "gradient-nonconstant-warping",
    "killing-einstein",
    "conformal-einstein",
    "concircular-euclidean",
);

/// Names of the built-in scenarios, in a fixed order.
pub fn catalog() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _)| *n).collect()
}

/// The JSON source of a built-in scenario.
pub fn catalog_source(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn catalog_scenario(name: &str) -> Result<Scenario> {
    let src = catalog_source(name).ok_or_else(|| Error::Validation {
        name: name.to_string(),
        reason: format!("not in the catalog (known: {})", catalog().join(", ")),
    })?;
    Scenario::from_json(src, &format!("catalog:{name}"))
}
