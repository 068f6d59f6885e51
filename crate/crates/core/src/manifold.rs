//! Charts, points, fields, sampling plans and soliton parameters.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::MetricJet;
use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expr};

/// Unbounded interval ends are clamped to this magnitude before sampling.
pub const SAMPLING_CLAMP: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Point> {
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::domain(format!("non-finite coordinate {bad}")));
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point { coords }
    }
}

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Validation {
                name: "domain".into(),
                reason: format!("interval ({lo}, {hi}) is empty"),
            });
        }
        Ok(Interval { lo, hi })
    }

    pub fn unbounded() -> Interval {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    fn clamped(&self) -> (f64, f64) {
        (
            self.lo.max(-SAMPLING_CLAMP),
            self.hi.min(SAMPLING_CLAMP),
        )
    }
}

/// A single coordinate chart with a (possibly indefinite) metric.
///
/// Only the upper triangle of the metric is stored, so `metric_expr(i, j)`
/// and `metric_expr(j, i)` are the same expression.
#[derive(Debug, Clone)]
pub struct ChartManifold {
    name: String,
    coord_names: Vec<String>,
    metric: Vec<Expr>,
    domain: Vec<Interval>,
    signature_hint: Option<(usize, usize)>,
}

fn upper_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * dim - i * (i + 1) / 2 + j
}

impl ChartManifold {
    /// Builds a chart from an already-parsed metric matrix; entries below the
    /// diagonal are ignored.
    pub fn new(
        name: impl Into<String>,
        coord_names: Vec<String>,
        metric: Vec<Vec<Expr>>,
        domain: Vec<Interval>,
    ) -> Result<ChartManifold> {
        let name = name.into();
        let d = coord_names.len();
        if d == 0 {
            return Err(Error::Validation {
                name,
                reason: "chart needs at least one coordinate".into(),
            });
        }
        for (i, c) in coord_names.iter().enumerate() {
            if coord_names[..i].contains(c) {
                return Err(Error::NameClash(c.clone()));
            }
        }
        if metric.len() != d || metric.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: metric.len(),
            });
        }
        if domain.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: domain.len(),
            });
        }
        let mut upper = Vec::with_capacity(d * (d + 1) / 2);
        for (i, row) in metric.into_iter().enumerate() {
            for (j, e) in row.into_iter().enumerate() {
                if j >= i {
                    if e.max_coord().is_some_and(|m| m >= d) {
                        return Err(Error::Validation {
                            name,
                            reason: format!("metric entry ({i},{j}) references a foreign coordinate"),
                        });
                    }
                    upper.push(e);
                }
            }
        }
        Ok(ChartManifold {
            name,
            coord_names,
            metric: upper,
            domain,
            signature_hint: None,
        })
    }

    /// Parses a metric given as rows of expression strings.
    pub fn parse(
        name: impl Into<String>,
        coords: &[&str],
        metric: &[&[&str]],
        domain: &[(f64, f64)],
    ) -> Result<ChartManifold> {
        let name = name.into();
        let rows = metric
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, text)| {
                        if j < i {
                            Ok(Expr::Constant(0.0))
                        } else {
                            parse_expr(text, coords)
                                .map_err(|e| e.in_context(format!("{name} metric[{i}][{j}]")))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let domain = domain
            .iter()
            .map(|(lo, hi)| Interval::new(*lo, *hi))
            .collect::<Result<Vec<_>>>()?;
        ChartManifold::new(
            name,
            coords.iter().map(|c| c.to_string()).collect(),
            rows,
            domain,
        )
    }

    /// Diagonal metric shorthand.
    pub fn diagonal(
        name: impl Into<String>,
        coords: &[&str],
        diag: &[&str],
        domain: &[(f64, f64)],
    ) -> Result<ChartManifold> {
        let d = coords.len();
        let rows: Vec<Vec<&str>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { diag[i] } else { "0" }).collect())
            .collect();
        let rows: Vec<&[&str]> = rows.iter().map(|r| r.as_slice()).collect();
        ChartManifold::parse(name, coords, &rows, domain)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> ChartManifold {
        self.name = name.into();
        self
    }

    pub fn with_signature(mut self, n_plus: usize, n_minus: usize) -> ChartManifold {
        self.signature_hint = Some((n_plus, n_minus));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coord_names.len()
    }

    pub fn coord_names(&self) -> &[String] {
        &self.coord_names
    }

    pub fn coord_refs(&self) -> Vec<&str> {
        self.coord_names.iter().map(String::as_str).collect()
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn signature_hint(&self) -> Option<(usize, usize)> {
        self.signature_hint
    }

    pub fn metric_expr(&self, i: usize, j: usize) -> &Expr {
        &self.metric[upper_index(self.dim(), i, j)]
    }

    pub fn parse_scalar(&self, text: &str) -> Result<ScalarField> {
        parse_expr(text, &self.coord_refs()).map(ScalarField::new)
    }

    pub fn parse_vector(&self, components: &[&str]) -> Result<VectorField> {
        if components.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: components.len(),
            });
        }
        let coords = self.coord_refs();
        components
            .iter()
            .map(|c| parse_expr(c, &coords))
            .collect::<Result<Vec<_>>>()
            .map(VectorField::Components)
    }

    pub fn check_point(&self, pt: &Point) -> Result<()> {
        if pt.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: pt.dim(),
            });
        }
        Ok(())
    }

    pub fn in_domain(&self, pt: &Point) -> bool {
        pt.dim() == self.dim()
            && self
                .domain
                .iter()
                .zip(&pt.coords)
                .all(|(iv, x)| iv.contains(*x))
    }

    /// Metric values at a point (no derivatives).
    pub fn metric_at(&self, pt: &[f64]) -> Result<DMatrix<f64>> {
        let d = self.dim();
        let mut g = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let v = self.metric_expr(i, j).eval(pt)?;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        Ok(g)
    }

    /// Sign counts `(n_plus, n_minus)` of the metric eigenvalues at `pt`.
    pub fn signature_at(&self, pt: &[f64]) -> Result<(usize, usize)> {
        let g = self.metric_at(pt)?;
        let eig = SymmetricEigen::new(g);
        let plus = eig.eigenvalues.iter().filter(|v| **v > 0.0).count();
        let minus = eig.eigenvalues.iter().filter(|v| **v < 0.0).count();
        Ok((plus, minus))
    }

    pub fn is_riemannian_at(&self, pt: &[f64]) -> Result<bool> {
        Ok(self.signature_at(pt)?.0 == self.dim())
    }

    /// Nondegeneracy and signature-hint checks over a sample.
    pub fn validate(&self, plan: &SamplePlan) -> Result<()> {
        for pt in sample_points(self, plan)? {
            let g = self.metric_at(&pt.coords)?;
            let det = g.clone().lu().determinant();
            if det.abs() <= 1e-12 {
                return Err(Error::SingularMetric { det });
            }
            if let Some(hint) = self.signature_hint {
                let sig = self.signature_at(&pt.coords)?;
                if sig != hint {
                    return Err(Error::Signature(format!(
                        "chart `{}` has signature {sig:?} at {:?}, expected {hint:?}",
                        self.name, pt.coords
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub expr: Expr,
}

impl ScalarField {
    pub fn new(expr: Expr) -> ScalarField {
        ScalarField { expr }
    }
}

/// A contravariant vector field on a chart.
///
/// `Components` is the plain form. `Gradient` is the metric gradient of a
/// scalar (components `g^{ij} ∂_j φ`, assembled per point), and `Sum` is a
/// constant-coefficient linear combination.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorField {
    Components(Vec<Expr>),
    Gradient(Expr),
    Sum(Vec<(f64, VectorField)>),
}

/// A vector field evaluated at a point: components and their first partials,
/// `jacobian[(k, i)] = ∂_i X^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorJet {
    pub value: Vec<f64>,
    pub jacobian: DMatrix<f64>,
}

impl VectorField {
    pub fn zero(dim: usize) -> VectorField {
        VectorField::Components(vec![Expr::Constant(0.0); dim])
    }

    pub fn scaled(self, a: f64) -> VectorField {
        VectorField::Sum(vec![(a, self)])
    }

    pub fn eval(&self, pt: &Point, metric: &MetricJet) -> Result<VectorJet> {
        let d = pt.dim();
        match self {
            VectorField::Components(cs) => {
                if cs.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: cs.len(),
                    });
                }
                let mut value = vec![0.0; d];
                let mut jacobian = DMatrix::zeros(d, d);
                for (k, c) in cs.iter().enumerate() {
                    let j = c.eval_jet2(&pt.coords)?;
                    value[k] = j.value();
                    for i in 0..d {
                        jacobian[(k, i)] = j.grad()[i];
                    }
                }
                Ok(VectorJet { value, jacobian })
            }
            VectorField::Gradient(phi) => {
                let j = phi.eval_jet2(&pt.coords)?;
                let ginv = &metric.g_inv;
                let mut value = vec![0.0; d];
                for k in 0..d {
                    value[k] = (0..d).map(|l| ginv[(k, l)] * j.grad()[l]).sum();
                }
                // ∂_i (g^{kl} ∂_l φ) = ∂_i g^{kl} ∂_l φ + g^{kl} ∂_i ∂_l φ
                let mut jacobian = DMatrix::zeros(d, d);
                for k in 0..d {
                    for i in 0..d {
                        let mut s = 0.0;
                        for l in 0..d {
                            s += metric.d_inv(i, k, l) * j.grad()[l] + ginv[(k, l)] * j.hess(i, l);
                        }
                        jacobian[(k, i)] = s;
                    }
                }
                Ok(VectorJet { value, jacobian })
            }
            VectorField::Sum(terms) => {
                let mut value = vec![0.0; d];
                let mut jacobian = DMatrix::zeros(d, d);
                for (a, field) in terms {
                    let v = field.eval(pt, metric)?;
                    for k in 0..d {
                        value[k] += a * v.value[k];
                    }
                    jacobian += v.jacobian * *a;
                }
                Ok(VectorJet { value, jacobian })
            }
        }
    }

    /// Lift into a product chart of dimension `total` where this field's
    /// chart occupies coordinates `offset..offset + dim`.
    ///
    /// Gradients lift only from the base block (offset 0), where the product
    /// metric restricts to the base metric.
    pub fn lift(&self, offset: usize, total: usize) -> Result<VectorField> {
        match self {
            VectorField::Components(cs) => {
                let mut out = vec![Expr::Constant(0.0); total];
                for (k, c) in cs.iter().enumerate() {
                    out[offset + k] = c.shifted(offset);
                }
                Ok(VectorField::Components(out))
            }
            VectorField::Gradient(phi) if offset == 0 => Ok(VectorField::Gradient(phi.clone())),
            VectorField::Gradient(_) => Err(Error::Unsupported(
                "gradient fields lift only from the base factor".into(),
            )),
            VectorField::Sum(terms) => terms
                .iter()
                .map(|(a, f)| f.lift(offset, total).map(|l| (*a, l)))
                .collect::<Result<Vec<_>>>()
                .map(VectorField::Sum),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    pub lambda: f64,
    pub pressure: f64,
    pub n_conv: u32,
}

impl SolitonParams {
    pub fn new(lambda: f64, pressure: f64, n_conv: u32) -> Result<SolitonParams> {
        if n_conv == 0 {
            return Err(Error::Validation {
                name: "n_conv".into(),
                reason: "must be at least 1".into(),
            });
        }
        Ok(SolitonParams {
            lambda,
            pressure,
            n_conv,
        })
    }

    /// Parameters whose derived constant equals `mu`.
    pub fn with_mu(mu: f64, pressure: f64, n_conv: u32) -> Result<SolitonParams> {
        let lambda = (mu + pressure + 2.0 / f64::from(n_conv.max(1))) / 2.0;
        SolitonParams::new(lambda, pressure, n_conv)
    }

    pub fn mu(&self) -> f64 {
        mu_value(self)
    }
}

/// `μ = 2λ − (p + 2/n)`.
pub fn mu_value(params: &SolitonParams) -> f64 {
    2.0 * params.lambda - (params.pressure + 2.0 / f64::from(params.n_conv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolitonKind {
    Shrinking,
    Steady,
    Expanding,
}

pub fn classify_lambda(lambda: f64) -> SolitonKind {
    if lambda > 0.0 {
        SolitonKind::Shrinking
    } else if lambda < 0.0 {
        SolitonKind::Expanding
    } else {
        SolitonKind::Steady
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub count: usize,
    pub seed: u64,
    pub margin: f64,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            count: 64,
            seed: 42,
            margin: 0.05,
        }
    }
}

impl SamplePlan {
    pub fn new(count: usize, seed: u64, margin: f64) -> SamplePlan {
        SamplePlan {
            count,
            seed,
            margin,
        }
    }
}

/// Deterministic uniform samples inside the margin-shrunk domain box.
pub fn sample_points(m: &ChartManifold, plan: &SamplePlan) -> Result<Vec<Point>> {
    sample_box(m.domain(), m.coord_names(), plan)
}

pub(crate) fn sample_box(
    domain: &[Interval],
    names: &[String],
    plan: &SamplePlan,
) -> Result<Vec<Point>> {
    if plan.count == 0 {
        return Err(Error::InvalidPlan("count must be positive".into()));
    }
    if !(0.0..=0.5).contains(&plan.margin) {
        return Err(Error::InvalidPlan(format!(
            "margin {} outside [0, 0.5)",
            plan.margin
        )));
    }
    let boxes = domain
        .iter()
        .zip(names)
        .map(|(iv, name)| {
            let (lo, hi) = iv.clamped();
            let shrink = plan.margin * (hi - lo);
            let (lo, hi) = (lo + shrink, hi - shrink);
            if lo < hi {
                Ok((lo, hi))
            } else {
                Err(Error::EmptyDomain {
                    coord: name.clone(),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let points = (0..plan.count)
        .map(|_| {
            let coords = boxes
                .iter()
                .map(|(lo, hi)| loop {
                    let x = lo + (hi - lo) * rng.random::<f64>();
                    if x > *lo && x < *hi {
                        break x;
                    }
                })
                .collect();
            Point { coords }
        })
        .collect();
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line01() -> ChartManifold {
        ChartManifold::diagonal("line", &["t"], &["1"], &[(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let plan = SamplePlan::new(3, 7, 0.05);
        let a = sample_points(&line01(), &plan).unwrap();
        let b = sample_points(&line01(), &plan).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert!(a.iter().all(|p| p.coords[0] > 0.05 && p.coords[0] < 0.95));
    }

    #[test]
    fn half_margin_collapses_domain() {
        let plan = SamplePlan::new(3, 7, 0.5);
        assert_eq!(
            sample_points(&line01(), &plan),
            Err(Error::EmptyDomain { coord: "t".into() })
        );
    }

    #[test]
    fn sphere_samples_avoid_poles() {
        let pi = std::f64::consts::PI;
        let s = ChartManifold::diagonal(
            "S2",
            &["theta", "phi"],
            &["1", "sin(theta)^2"],
            &[(0.0, pi), (0.0, 2.0 * pi)],
        )
        .unwrap();
        let pts = sample_points(&s, &SamplePlan::new(64, 1, 0.0)).unwrap();
        assert_eq!(pts.len(), 64);
        assert!(pts.iter().all(|p| p.coords[0].sin() > 0.0));
    }

    #[test]
    fn unbounded_domains_are_clamped() {
        let r = ChartManifold::new(
            "R",
            vec!["x".into()],
            vec![vec![Expr::Constant(1.0)]],
            vec![Interval::unbounded()],
        )
        .unwrap();
        let pts = sample_points(&r, &SamplePlan::new(100, 3, 0.0)).unwrap();
        assert!(pts.iter().all(|p| p.coords[0].abs() < SAMPLING_CLAMP));
    }

    #[test]
    fn mu_examples() {
        let p = SolitonParams::new(1.0, 0.0, 2).unwrap();
        assert_eq!(mu_value(&p), 1.0);
        for n in 1..6 {
            let p = SolitonParams::new(0.0, -2.0 / f64::from(n), n).unwrap();
            assert_eq!(mu_value(&p), 0.0);
        }
        // λ = p/2 + 1/n + 1 gives μ = 2
        let (pr, n) = (0.3, 4);
        let p = SolitonParams::new(pr / 2.0 + 1.0 / 4.0 + 1.0, pr, n).unwrap();
        assert!((mu_value(&p) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn with_mu_inverts_mu_value() {
        let p = SolitonParams::with_mu(2.0, 0.0, 4).unwrap();
        assert_eq!(p.lambda, 1.25);
        assert_eq!(p.mu(), 2.0);
    }

    #[test]
    fn metric_is_symmetric_as_stored() {
        let m = ChartManifold::parse(
            "skew",
            &["x", "y"],
            &[&["1", "x"], &["999", "2"]],
            &[(-1.0, 1.0), (-1.0, 1.0)],
        )
        .unwrap();
        let g = m.metric_at(&[0.5, 0.0]).unwrap();
        assert_eq!(g[(0, 1)], g[(1, 0)]);
        assert_eq!(g[(1, 0)], 0.5);
    }

    #[test]
    fn minkowski_signature() {
        let m = ChartManifold::diagonal("mink", &["t", "x"], &["-1", "1"], &[(-1.0, 1.0), (-1.0, 1.0)])
            .unwrap()
            .with_signature(1, 1);
        m.validate(&SamplePlan::default()).unwrap();
        let wrong = m.clone().with_signature(2, 0);
        assert!(matches!(wrong.validate(&SamplePlan::default()), Err(Error::Signature(_))));
    }

    #[test]
    fn degenerate_metric_rejected() {
        let m = ChartManifold::diagonal("deg", &["x"], &["0*x"], &[(-1.0, 1.0)]).unwrap();
        assert!(matches!(
            m.validate(&SamplePlan::default()),
            Err(Error::SingularMetric { .. })
        ));
    }

    proptest! {
        #[test]
        fn lambda_class_scale_invariant(lambda in -1e6f64..1e6, scale in 1e-6f64..1e6) {
            prop_assert_eq!(classify_lambda(lambda), classify_lambda(lambda * scale));
        }

        #[test]
        fn samples_inside_shrunk_box(seed in any::<u64>(), margin in 0.0f64..0.49) {
            let m = ChartManifold::diagonal("b", &["x", "y"], &["1", "1"], &[(-2.0, 3.0), (0.0, 1.0)]).unwrap();
            let pts = sample_points(&m, &SamplePlan::new(16, seed, margin)).unwrap();
            for p in pts {
                prop_assert!(p.coords[0] > -2.0 + 5.0 * margin && p.coords[0] < 3.0 - 5.0 * margin);
                prop_assert!(p.coords[1] > margin && p.coords[1] < 1.0 - margin);
            }
        }
    }
}
