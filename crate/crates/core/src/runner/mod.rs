//! JSON scenarios, the built-in catalog, suite orchestration and reports.
//!
//! A scenario names charts, warped products, fields and a list of suites.
//! Everything is parsed and cross-checked by [`load_scenario`] /
//! [`Scenario::from_json`]; [`run`] then executes the suites in declaration
//! order and never fails on a suite error, which is recorded in the report.

mod catalog;
mod schema;

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use catalog::{catalog, catalog_scenario, catalog_source};
pub use schema::{
    FieldSpec, GrwSpec, ManifoldSpec, SamplesSpec, ScenarioSpec, SuiteKind, SuiteSpec, WarpedSpec,
};

use crate::curvature::{fd_deviation, Geometry, FD_CHRISTOFFEL_BUDGET, FD_CURVATURE_BUDGET};
use crate::error::{Error, Result};
use crate::expr::parse_expr;
use crate::manifold::{
    sample_points, ChartManifold, Interval, SamplePlan, ScalarField, SolitonParams, VectorField,
};
use crate::report::{max_abs, worst, Check, Provenance, SuiteReport};
use crate::soliton::{
    classify_field, concircular_suite, concurrent_suite, conformal_einstein_suite, einstein_fit,
    gradient_equivalence_defect, gradient_induced_solitons, grw_suite, induced_solitons,
    killing_einstein_suite, soliton_residual_mu, gradient_soliton_residual_mu,
};
use crate::warped::{build_grw, build_warped, WarpedProduct};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Default finite-difference step of the `fd-check` suite.
pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub scenario: String,
    pub engine_version: String,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

impl ReportFile {
    fn assemble(scenario: &str, suites: Vec<SuiteReport>) -> ReportFile {
        let pass = suites.iter().all(SuiteReport::pass);
        ReportFile {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.to_string(),
            engine_version: ENGINE_VERSION.to_string(),
            suites,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone)]
enum FieldValue {
    Scalar(ScalarField),
    Vector(VectorField),
}

#[derive(Debug, Clone)]
struct Field {
    chart: String,
    value: FieldValue,
}

#[derive(Debug, Clone)]
struct Warped {
    wp: WarpedProduct,
    base: String,
    fiber: String,
}

#[derive(Debug, Clone)]
enum Action {
    Flatness,
    Einstein(Option<f64>),
    ScalarCurvature(f64),
    FdCheck(f64),
    Soliton(VectorField),
    GradientSoliton(ScalarField),
    Equivalence(ScalarField),
    Classify(VectorField, Option<String>),
    Concircular(VectorField),
    Identities,
    MixedRicci,
    LieSplit(VectorField, VectorField),
    Induced(VectorField, VectorField),
    GradientInduced(ScalarField),
    KillingEinstein(VectorField, VectorField),
    ConformalEinstein(VectorField, VectorField),
    Concurrent(VectorField, VectorField),
    Grw(ScalarField),
}

#[derive(Debug, Clone)]
enum Target {
    Chart(ChartManifold),
    Warped(WarpedProduct),
}

#[derive(Debug, Clone)]
struct Job {
    name: String,
    target: Target,
    action: Action,
    params: Option<SolitonParams>,
    tolerance: f64,
    plan: SamplePlan,
}

/// A fully parsed and cross-checked scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    charts: Vec<(String, ChartManifold)>,
    jobs: Vec<Job>,
}

impl Scenario {
    /// Parses scenario JSON; `origin` names the source in parse errors.
    pub fn from_json(text: &str, origin: &str) -> Result<Scenario> {
        let spec: ScenarioSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_string(),
            position: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Scenario::from_spec(spec)
    }

    pub fn from_spec(spec: ScenarioSpec) -> Result<Scenario> {
        Builder::default().build(spec)
    }

    /// Names of every chart, including products and GRW time lines.
    pub fn chart_names(&self) -> Vec<&str> {
        self.charts.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn chart(&self, name: &str) -> Option<&ChartManifold> {
        self.charts.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn suite_count(&self) -> usize {
        self.jobs.len()
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Scenario::from_json(&text, &path.display().to_string())
}

fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Validation {
        name: name.into(),
        reason: reason.into(),
    }
}

fn interval(bounds: &[Option<f64>; 2]) -> Result<Interval> {
    Interval::new(
        bounds[0].unwrap_or(f64::NEG_INFINITY),
        bounds[1].unwrap_or(f64::INFINITY),
    )
}

#[derive(Default)]
struct Builder {
    charts: Vec<(String, ChartManifold)>,
    warped: HashMap<String, Warped>,
    fields: HashMap<String, Field>,
}

impl Builder {
    fn chart(&self, name: &str, wanted_by: &str) -> Result<&ChartManifold> {
        self.charts
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| invalid(wanted_by, format!("undefined manifold `{name}`")))
    }

    fn register(&mut self, name: &str, chart: ChartManifold) -> Result<()> {
        if self.charts.iter().any(|(n, _)| n == name) {
            return Err(invalid(name, "name defined twice"));
        }
        self.charts.push((name.to_string(), chart));
        Ok(())
    }

    fn build(mut self, spec: ScenarioSpec) -> Result<Scenario> {
        for m in &spec.manifolds {
            let chart = manifold(m)?;
            self.register(&m.name, chart)?;
        }
        for w in &spec.warped {
            self.add_warped(w)?;
        }
        for f in &spec.fields {
            self.add_field(f)?;
        }
        let jobs = spec
            .suites
            .iter()
            .enumerate()
            .map(|(i, s)| self.job(s).map_err(|e| e.in_context(format!("suites[{i}] ({})", s.kind.as_str()))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scenario {
            name: spec.name,
            charts: self.charts,
            jobs,
        })
    }

    fn add_warped(&mut self, w: &WarpedSpec) -> Result<()> {
        let fiber = self.chart(&w.fiber, &w.name)?.clone();
        let context = format!("warped `{}` warping", w.name);
        let (wp, base_name) = match (&w.base, &w.grw) {
            (Some(base), None) => {
                let b = self.chart(base, &w.name)?.clone();
                let f = b.parse_scalar(&w.warping).map_err(|e| e.in_context(context))?;
                (build_warped(b, fiber, f)?, base.clone())
            }
            (None, Some(g)) => {
                let f = parse_expr(&w.warping, &[g.coord.as_str()]).map_err(|e| e.in_context(context))?;
                let wp = build_grw(&g.coord, interval(&g.domain)?, ScalarField::new(f), fiber)?;
                let base_name = format!("{}.base", w.name);
                self.register(&base_name, wp.base().clone().renamed(base_name.clone()))?;
                (wp, base_name)
            }
            _ => return Err(invalid(&w.name, "give exactly one of `base` and `grw`")),
        };
        let wp = wp.renamed(w.name.clone());
        self.register(&w.name, wp.product().clone())?;
        self.warped.insert(
            w.name.clone(),
            Warped {
                wp,
                base: base_name,
                fiber: w.fiber.clone(),
            },
        );
        Ok(())
    }

    fn add_field(&mut self, f: &FieldSpec) -> Result<()> {
        if self.fields.contains_key(&f.name) {
            return Err(invalid(&f.name, "field defined twice"));
        }
        let chart = self.chart(&f.chart, &f.name)?;
        let context = format!("field `{}`", f.name);
        let value = match (&f.scalar, &f.vector) {
            (Some(s), None) => FieldValue::Scalar(chart.parse_scalar(s).map_err(|e| e.in_context(context))?),
            (None, Some(v)) => {
                let refs: Vec<&str> = v.iter().map(String::as_str).collect();
                FieldValue::Vector(chart.parse_vector(&refs).map_err(|e| e.in_context(context))?)
            }
            _ => return Err(invalid(&f.name, "give exactly one of `scalar` and `vector`")),
        };
        self.fields.insert(
            f.name.clone(),
            Field {
                chart: f.chart.clone(),
                value,
            },
        );
        Ok(())
    }

    fn field(&self, name: Option<&String>, slot: &str, chart: &str) -> Result<&FieldValue> {
        let name = name.ok_or_else(|| invalid(slot, "missing"))?;
        let f = self
            .fields
            .get(name)
            .ok_or_else(|| invalid(slot, format!("undefined field `{name}`")))?;
        if f.chart != chart {
            return Err(invalid(
                slot,
                format!("field `{name}` lives on `{}`, expected `{chart}`", f.chart),
            ));
        }
        Ok(&f.value)
    }

    fn vector(&self, name: Option<&String>, slot: &str, chart: &str) -> Result<VectorField> {
        match self.field(name, slot, chart)? {
            FieldValue::Vector(v) => Ok(v.clone()),
            FieldValue::Scalar(_) => Err(invalid(slot, "expected a vector field")),
        }
    }

    fn scalar(&self, name: Option<&String>, slot: &str, chart: &str) -> Result<ScalarField> {
        match self.field(name, slot, chart)? {
            FieldValue::Scalar(s) => Ok(s.clone()),
            FieldValue::Vector(_) => Err(invalid(slot, "expected a scalar field")),
        }
    }

    fn job(&self, s: &SuiteSpec) -> Result<Job> {
        use SuiteKind as K;
        let target = &s.target;
        let warped = || {
            self.warped
                .get(target)
                .ok_or_else(|| invalid("target", format!("`{target}` is not a warped product")))
        };
        let factor_fields = |w: &Warped| -> Result<(VectorField, VectorField)> {
            Ok((
                self.vector(s.base_field.as_ref(), "base_field", &w.base)?,
                self.vector(s.fiber_field.as_ref(), "fiber_field", &w.fiber)?,
            ))
        };

        let (target_obj, action, default_n) = match s.kind {
            K::Flatness
            | K::Einstein
            | K::ScalarCurvature
            | K::FdCheck
            | K::Soliton
            | K::GradientSoliton
            | K::Equivalence
            | K::Classify
            | K::Concircular => {
                let chart = self.chart(target, "target")?.clone();
                let action = match s.kind {
                    K::Flatness => Action::Flatness,
                    K::Einstein => Action::Einstein(s.expected),
                    K::ScalarCurvature => Action::ScalarCurvature(
                        s.expected.ok_or_else(|| invalid("expected", "missing"))?,
                    ),
                    K::FdCheck => {
                        let h = s.h.unwrap_or(FD_STEP);
                        if !(h > 0.0) {
                            return Err(invalid("h", "must be positive"));
                        }
                        Action::FdCheck(h)
                    }
                    K::Soliton => Action::Soliton(self.vector(s.field.as_ref(), "field", target)?),
                    K::GradientSoliton => {
                        Action::GradientSoliton(self.scalar(s.potential.as_ref(), "potential", target)?)
                    }
                    K::Equivalence => {
                        Action::Equivalence(self.scalar(s.potential.as_ref(), "potential", target)?)
                    }
                    K::Classify => {
                        if let Some(e) = &s.expect {
                            const KINDS: [&str; 5] =
                                ["killing", "conformal", "concircular", "concurrent", "unclassified"];
                            if !KINDS.contains(&e.as_str()) {
                                return Err(invalid("expect", format!("unknown field kind `{e}`")));
                            }
                        }
                        Action::Classify(self.vector(s.field.as_ref(), "field", target)?, s.expect.clone())
                    }
                    _ => Action::Concircular(self.vector(s.field.as_ref(), "field", target)?),
                };
                let n = chart.dim();
                (Target::Chart(chart), action, n)
            }
            _ => {
                let w = warped()?;
                let action = match s.kind {
                    K::WarpedIdentities => Action::Identities,
                    K::MixedRicci => Action::MixedRicci,
                    K::LieSplit => {
                        let (b, f) = factor_fields(w)?;
                        Action::LieSplit(b, f)
                    }
                    K::Induced => {
                        let (b, f) = factor_fields(w)?;
                        Action::Induced(b, f)
                    }
                    K::GradientInduced => {
                        Action::GradientInduced(self.scalar(s.potential.as_ref(), "potential", target)?)
                    }
                    K::KillingEinstein => {
                        let (b, f) = factor_fields(w)?;
                        Action::KillingEinstein(b, f)
                    }
                    K::ConformalEinstein => {
                        let (b, f) = factor_fields(w)?;
                        Action::ConformalEinstein(b, f)
                    }
                    K::Concurrent => {
                        let (b, f) = factor_fields(w)?;
                        Action::Concurrent(b, f)
                    }
                    _ => {
                        if !w.wp.is_lorentzian() {
                            return Err(invalid("target", format!("`{target}` is not a GRW spacetime")));
                        }
                        Action::Grw(self.scalar(s.potential.as_ref(), "potential", target)?)
                    }
                };
                let n = if s.kind == K::Grw {
                    w.wp.fiber_dim()
                } else {
                    w.wp.product().dim()
                };
                (Target::Warped(w.wp.clone()), action, n)
            }
        };

        let params = if s.kind.needs_params() {
            let lambda = s.lambda.ok_or_else(|| invalid("lambda", "missing"))?;
            let n = s.n_conv.unwrap_or(default_n as u32);
            Some(SolitonParams::new(lambda, s.pressure.unwrap_or(0.0), n)?)
        } else {
            None
        };
        let tolerance = s.tolerance.unwrap_or_else(|| s.kind.default_tolerance());
        if !(tolerance >= 0.0) {
            return Err(invalid("tolerance", "must be non-negative"));
        }
        let mut plan = SamplePlan::default();
        if let Some(sm) = &s.samples {
            plan.count = sm.count.unwrap_or(plan.count);
            plan.seed = sm.seed.unwrap_or(plan.seed);
            plan.margin = sm.margin.unwrap_or(plan.margin);
        }
        Ok(Job {
            name: s.label.clone().unwrap_or_else(|| format!("{}:{target}", s.kind.as_str())),
            target: target_obj,
            action,
            params,
            tolerance,
            plan,
        })
    }
}

fn manifold(m: &ManifoldSpec) -> Result<ChartManifold> {
    let coords: Vec<&str> = m.coords.iter().map(String::as_str).collect();
    let d = coords.len();
    if m.metric.len() != d || m.metric.iter().any(|r| r.len() != d) {
        return Err(invalid(&m.name, format!("metric must be {d} x {d}")));
    }
    if m.domain.len() != d {
        return Err(invalid(&m.name, format!("domain needs {d} intervals")));
    }
    let metric = m
        .metric
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, text)| {
                    parse_expr(text, &coords)
                        .map_err(|e| e.in_context(format!("manifold `{}` metric[{i}][{j}]", m.name)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    // The chart stores the upper triangle; insist the file is symmetric.
    for i in 0..d {
        for j in 0..i {
            if metric[i][j] != metric[j][i] {
                return Err(invalid(&m.name, format!("metric[{i}][{j}] differs from metric[{j}][{i}]")));
            }
        }
    }
    let domain = m.domain.iter().map(interval).collect::<Result<Vec<_>>>()?;
    let mut chart = ChartManifold::new(m.name.clone(), m.coords.clone(), metric, domain)?;
    if let Some([p, q]) = m.signature {
        if p + q != d {
            return Err(invalid(&m.name, "signature does not add up to the dimension"));
        }
        chart = chart.with_signature(p, q);
    }
    Ok(chart)
}

fn provenance(plan: &SamplePlan, params: Option<&SolitonParams>) -> Provenance {
    Provenance {
        seed: plan.seed,
        count: plan.count,
        n_conv: params.map(|p| p.n_conv),
    }
}

fn chart_suite(m: &ChartManifold, action: &Action, job: &Job, tol: f64, plan: &SamplePlan) -> Result<SuiteReport> {
    let pts = sample_points(m, plan)?;
    let mut r = SuiteReport::new(job.name.clone(), provenance(plan, job.params.as_ref()));
    let mu = job.params.map(|p| p.mu()).unwrap_or(0.0);
    match action {
        Action::Flatness => {
            let geos = pts.iter().map(|p| Geometry::at(m, p)).collect::<Result<Vec<_>>>()?;
            r.push(Check::measured(
                "riemann",
                max_abs(geos.iter().map(|g| max_abs(g.riemann.values().iter().copied()))),
                tol,
            ))
            .push(Check::measured(
                "ricci",
                max_abs(geos.iter().map(|g| max_abs(g.ricci.iter().copied()))),
                tol,
            ))
            .push(Check::measured("scalar", max_abs(geos.iter().map(|g| g.scalar)), tol));
        }
        Action::Einstein(expected) => {
            let (c, res) = einstein_fit(m, plan)?;
            r.push(Check::measured("einstein", res, tol).with_note(format!("fitted c = {c:.12e}")));
            if let Some(e) = expected {
                let dev = worst(&pts, |p| {
                    let geo = Geometry::at(m, p)?;
                    Ok(max_abs((&geo.ricci - geo.g() * *e).iter().copied()))
                })?;
                r.push(Check::measured("einstein-constant", (c - e).abs(), tol))
                    .push(Check::measured("ricci-equals-expected", dev, tol));
            }
        }
        Action::ScalarCurvature(expected) => {
            let dev = worst(&pts, |p| Ok((Geometry::at(m, p)?.scalar - expected).abs()))?;
            r.push(Check::measured("scalar-curvature", dev, tol));
        }
        Action::FdCheck(h) => {
            let (mut dg, mut dr, mut dric) = (0.0f64, 0.0f64, 0.0f64);
            for p in &pts {
                let (a, b, c) = fd_deviation(m, p, *h)?;
                dg = dg.max(a);
                dr = dr.max(b);
                dric = dric.max(c);
            }
            let note = format!("h = {h:e}");
            // Christoffel symbols get the tighter of the two budgets.
            let tg = FD_CHRISTOFFEL_BUDGET.min(tol);
            r.push(Check::measured("christoffel-deviation", dg, tg).with_note(note.clone()))
                .push(Check::measured("riemann-deviation", dr, tol).with_note(note.clone()))
                .push(Check::measured("ricci-deviation", dric, tol).with_note(note));
        }
        Action::Soliton(xi) => {
            let res = worst(&pts, |p| Ok(max_abs(soliton_residual_mu(m, xi, mu, p)?.iter().copied())))?;
            r.push(Check::measured("soliton", res, tol));
        }
        Action::GradientSoliton(phi) => {
            let res = worst(&pts, |p| {
                Ok(max_abs(gradient_soliton_residual_mu(m, phi, mu, p)?.iter().copied()))
            })?;
            r.push(Check::measured("gradient-soliton", res, tol)).push(Check::measured(
                "equivalence",
                gradient_equivalence_defect(m, phi, mu, &pts)?,
                tol,
            ));
        }
        Action::Equivalence(phi) => {
            r.push(Check::measured(
                "equivalence",
                gradient_equivalence_defect(m, phi, mu, &pts)?,
                tol,
            ));
        }
        Action::Classify(xi, expect) => {
            let class = classify_field(m, xi, plan, tol)?;
            let found = class.kind.name();
            let note = format!("classified as {found}");
            match expect.as_deref() {
                Some(kind) => {
                    let res = match kind {
                        "killing" => class.killing_residual(),
                        "conformal" => class.conformal_residual(),
                        "concircular" => class.concircular_residual(),
                        "concurrent" => class.concurrent_residual(),
                        _ => {
                            // unclassified: every residual of the ladder must exceed tol
                            if found == "unclassified" { 0.0 } else { f64::INFINITY }
                        }
                    };
                    r.push(Check::measured(kind, res, tol).with_note(note));
                }
                None => {
                    r.push(Check::measured(found, class.max_residual, tol).with_note(note));
                }
            }
        }
        Action::Concircular(xi) => {
            return concircular_suite(m, xi, job.params.as_ref().expect("params"), plan, tol)
                .map(|mut s| {
                    s.suite = job.name.clone();
                    s
                });
        }
        _ => unreachable!("warped action on a chart target"),
    }
    Ok(r)
}

fn warped_suite(wp: &WarpedProduct, action: &Action, job: &Job, tol: f64, plan: &SamplePlan) -> Result<SuiteReport> {
    let params = job.params.as_ref();
    let p = || params.expect("validated at load");
    let mut r = match action {
        Action::Identities => wp.verify_identities(plan, tol)?,
        Action::MixedRicci => {
            let mut r = SuiteReport::new(job.name.clone(), provenance(plan, None));
            r.push(Check::measured("ricci-mixed", wp.mixed_ricci(plan)?, tol));
            r
        }
        Action::LieSplit(b, f) => wp.lie_split_suite(b, f, plan, tol)?,
        Action::Induced(b, f) => induced_solitons(wp, b, f, p(), plan, tol)?.1,
        Action::GradientInduced(phi) => gradient_induced_solitons(wp, phi, p(), plan, tol)?,
        Action::KillingEinstein(b, f) => killing_einstein_suite(wp, b, f, p(), plan, tol)?,
        Action::ConformalEinstein(b, f) => conformal_einstein_suite(wp, b, f, p(), plan, tol)?,
        Action::Concurrent(b, f) => concurrent_suite(wp, b, f, p(), plan, tol)?,
        Action::Grw(phi) => grw_suite(wp, phi, p(), plan, tol)?,
        _ => return chart_suite(wp.product(), action, job, tol, plan),
    };
    r.suite = job.name.clone();
    Ok(r)
}

fn run_job(job: &Job, ov: &Overrides) -> SuiteReport {
    let tol = ov.tolerance.unwrap_or(job.tolerance);
    let mut plan = job.plan;
    plan.seed = ov.seed.unwrap_or(plan.seed);
    plan.count = ov.count.unwrap_or(plan.count);
    let outcome = match &job.target {
        Target::Chart(m) => chart_suite(m, &job.action, job, tol, &plan),
        Target::Warped(wp) => warped_suite(wp, &job.action, job, tol, &plan),
    };
    match outcome {
        Ok(mut r) => {
            if ov.tolerance.is_some() {
                r.retolerance(tol);
            }
            r
        }
        Err(e) => {
            let mut r = SuiteReport::new(job.name.clone(), provenance(&plan, job.params.as_ref()));
            let name = if matches!(e.root(), Error::HypothesisFailed { .. }) {
                "hypothesis"
            } else {
                "error"
            };
            r.push(Check::errored(name, tol, &e));
            r
        }
    }
}

/// Runs every suite in declaration order.
pub fn run(scenario: &Scenario, overrides: &Overrides) -> ReportFile {
    run_with(scenario, overrides, false)
}

/// As [`run`]; with `parallel` the suites run on scoped threads. The report
/// is identical either way.
pub fn run_with(scenario: &Scenario, overrides: &Overrides, parallel: bool) -> ReportFile {
    let suites = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = scenario
                .jobs
                .iter()
                .map(|job| s.spawn(move || run_job(job, overrides)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("suite thread panicked"))
                .collect()
        })
    } else {
        scenario.jobs.iter().map(|job| run_job(job, overrides)).collect()
    };
    ReportFile::assemble(&scenario.name, suites)
}

/// Finite-difference cross-check of every chart in a scenario.
pub fn fd_check_scenario(scenario: &Scenario, h: f64, overrides: &Overrides) -> ReportFile {
    let jobs: Vec<Job> = scenario
        .charts
        .iter()
        .map(|(name, chart)| Job {
            name: format!("fd-check:{name}"),
            target: Target::Chart(chart.clone()),
            action: Action::FdCheck(h),
            params: None,
            tolerance: FD_CURVATURE_BUDGET,
            plan: SamplePlan::default(),
        })
        .collect();
    let suites = jobs.iter().map(|j| run_job(j, overrides)).collect();
    ReportFile::assemble(&scenario.name, suites)
}

#[cfg(test)]
mod tests;
