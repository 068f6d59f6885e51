//! Coordinate-chart differential geometry with exact second-order jets, and
//! numerical verification of conformal Ricci soliton identities on warped
//! products and generalized Robertson-Walker spacetimes.
//!
//! The pipeline is: [`expr`] (closed-form scalar expressions and their jets)
//! → [`manifold`] (charts, fields, sampling) → [`curvature`] (connection,
//! curvature, Hessians, Lie derivatives, finite-difference oracle) →
//! [`warped`] (product charts) → [`soliton`] (residuals, classifiers,
//! structural suites) → [`runner`] (JSON scenarios, catalog, reports).

pub mod curvature;
pub mod error;
pub mod expr;
pub mod manifold;
pub mod report;
pub mod runner;
pub mod soliton;
pub mod warped;

pub use error::{Error, Result};
pub use expr::{parse_expr, Expr, Jet2};
pub use manifold::{
    classify_lambda, mu_value, sample_points, ChartManifold, Interval, Point, SamplePlan,
    ScalarField, SolitonKind, SolitonParams, VectorField,
};
pub use report::{Check, Provenance, Status, SuiteReport};
pub use warped::WarpedProduct;
