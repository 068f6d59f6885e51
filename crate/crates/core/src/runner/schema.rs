//! On-disk scenario format.
//!
//! ```json
//! {
//!   "name": "polar",
//!   "manifolds": [
//!     {"name": "I", "coords": ["t"], "domain": [[0.2, 5]], "metric": [["1"]]},
//!     {"name": "S1", "coords": ["phi"], "domain": [[0, 6.283]], "metric": [["1"]]}
//!   ],
//!   "warped": [{"name": "P", "base": "I", "fiber": "S1", "warping": "t"}],
//!   "fields": [{"name": "r", "chart": "I", "vector": ["t"]}],
//!   "suites": [{"kind": "warped-identities", "target": "P"}]
//! }
//! ```
//!
//! A domain bound of `null` is unbounded. A GRW spacetime replaces `base`
//! with `"grw": {"coord": "t", "domain": [lo, hi]}`; its time line is then
//! registered as the chart `<name>.base`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default)]
    pub manifolds: Vec<ManifoldSpec>,
    #[serde(default)]
    pub warped: Vec<WarpedSpec>,
    #[serde(default)]
    pub fields: Vec<FieldSpec>,
    #[serde(default)]
    pub suites: Vec<SuiteSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub name: String,
    pub coords: Vec<String>,
    pub domain: Vec<[Option<f64>; 2]>,
    /// Full symmetric matrix of expressions.
    pub metric: Vec<Vec<String>>,
    /// `[n_plus, n_minus]`
    #[serde(default)]
    pub signature: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrwSpec {
    pub coord: String,
    pub domain: [Option<f64>; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarpedSpec {
    pub name: String,
    #[serde(default)]
    pub base: Option<String>,
    #[serde(default)]
    pub grw: Option<GrwSpec>,
    pub fiber: String,
    pub warping: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub name: String,
    pub chart: String,
    #[serde(default)]
    pub scalar: Option<String>,
    #[serde(default)]
    pub vector: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    Flatness,
    Einstein,
    ScalarCurvature,
    FdCheck,
    WarpedIdentities,
    MixedRicci,
    LieSplit,
    Soliton,
    GradientSoliton,
    Equivalence,
    Classify,
    Induced,
    GradientInduced,
    KillingEinstein,
    ConformalEinstein,
    Concircular,
    Concurrent,
    Grw,
}

impl SuiteKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteKind::Flatness => "flatness",
            SuiteKind::Einstein => "einstein",
            SuiteKind::ScalarCurvature => "scalar-curvature",
            SuiteKind::FdCheck => "fd-check",
            SuiteKind::WarpedIdentities => "warped-identities",
            SuiteKind::MixedRicci => "mixed-ricci",
            SuiteKind::LieSplit => "lie-split",
            SuiteKind::Soliton => "soliton",
            SuiteKind::GradientSoliton => "gradient-soliton",
            SuiteKind::Equivalence => "equivalence",
            SuiteKind::Classify => "classify",
            SuiteKind::Induced => "induced",
            SuiteKind::GradientInduced => "gradient-induced",
            SuiteKind::KillingEinstein => "killing-einstein",
            SuiteKind::ConformalEinstein => "conformal-einstein",
            SuiteKind::Concircular => "concircular",
            SuiteKind::Concurrent => "concurrent",
            SuiteKind::Grw => "grw",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            SuiteKind::Flatness => 1e-12,
            SuiteKind::FdCheck => crate::curvature::FD_CURVATURE_BUDGET,
            SuiteKind::MixedRicci
            | SuiteKind::Soliton
            | SuiteKind::GradientSoliton
            | SuiteKind::Equivalence
            | SuiteKind::Induced
            | SuiteKind::GradientInduced
            | SuiteKind::Concurrent => 1e-9,
            _ => 1e-8,
        }
    }

    /// Whether the suite needs `lambda` (and reads `pressure`, `n_conv`).
    pub fn needs_params(self) -> bool {
        matches!(
            self,
            SuiteKind::Soliton
                | SuiteKind::GradientSoliton
                | SuiteKind::Equivalence
                | SuiteKind::Induced
                | SuiteKind::GradientInduced
                | SuiteKind::KillingEinstein
                | SuiteKind::ConformalEinstein
                | SuiteKind::Concircular
                | SuiteKind::Concurrent
                | SuiteKind::Grw
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesSpec {
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub kind: SuiteKind,
    /// Chart or warped-product name.
    pub target: String,
    /// Report name; defaults to `<kind>:<target>`.
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub base_field: Option<String>,
    #[serde(default)]
    pub fiber_field: Option<String>,
    #[serde(default)]
    pub potential: Option<String>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub pressure: Option<f64>,
    #[serde(default)]
    pub n_conv: Option<u32>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub samples: Option<SamplesSpec>,
    /// Einstein constant or scalar curvature to compare against.
    #[serde(default)]
    pub expected: Option<f64>,
    /// Field kind a `classify` suite must confirm.
    #[serde(default)]
    pub expect: Option<String>,
    /// Finite-difference step for `fd-check`.
    #[serde(default)]
    pub h: Option<f64>,
}
