//! Warped products `B ×_f F` and generalized Robertson-Walker spacetimes,
//! realized as a single product chart with base coordinates first.

use nalgebra::DMatrix;

use crate::curvature::{lie_derivative_metric, Geometry, MetricJet};
use crate::error::{Error, Result};
use crate::expr::{Expr, Jet2};
use crate::manifold::{
    sample_points, ChartManifold, Interval, Point, SamplePlan, ScalarField, VectorField,
};
use crate::report::{max_abs, worst, Check, Provenance, SuiteReport};

/// Plan used to check positivity of the warping function at build time.
const WARPING_PLAN: SamplePlan = SamplePlan {
    count: 64,
    seed: 0,
    margin: 0.0,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Base,
    Fiber,
}

/// A factor field lifted to the product chart. Its components vanish outside
/// the origin block and do not depend on the other factor's coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedField {
    pub origin: Factor,
    pub field: VectorField,
}

#[derive(Debug, Clone)]
pub struct WarpedProduct {
    base: ChartManifold,
    fiber: ChartManifold,
    warping: ScalarField,
    product: ChartManifold,
    lorentzian: bool,
}

/// Builds `B ×_f F` with metric `g_B ⊕ f² g_F`.
pub fn build_warped(
    base: ChartManifold,
    fiber: ChartManifold,
    f: ScalarField,
) -> Result<WarpedProduct> {
    WarpedProduct::assemble(base, fiber, f, false)
}

/// Builds the spacetime `I ×_f F` with metric `−dt² ⊕ f² g_F`; `f` is an
/// expression in the single coordinate `time`.
pub fn build_grw(
    time: &str,
    interval: Interval,
    f: ScalarField,
    fiber: ChartManifold,
) -> Result<WarpedProduct> {
    for pt in sample_points(&fiber, &WARPING_PLAN)? {
        if !fiber.is_riemannian_at(&pt.coords)? {
            return Err(Error::Signature(format!(
                "fiber `{}` is not Riemannian at {:?}",
                fiber.name(),
                pt.coords
            )));
        }
    }
    let base = ChartManifold::new(
        "I",
        vec![time.to_string()],
        vec![vec![Expr::Constant(-1.0)]],
        vec![interval],
    )?
    .with_signature(0, 1);
    WarpedProduct::assemble(base, fiber, f, true)
}

impl WarpedProduct {
    fn assemble(
        base: ChartManifold,
        fiber: ChartManifold,
        f: ScalarField,
        lorentzian: bool,
    ) -> Result<WarpedProduct> {
        if let Some(c) = base.coord_names().iter().find(|c| fiber.coord_names().contains(c)) {
            return Err(Error::NameClash(c.clone()));
        }
        let (m, n) = (base.dim(), fiber.dim());
        if f.expr.max_coord().is_some_and(|i| i >= m) {
            return Err(Error::Validation {
                name: "warping".into(),
                reason: "warping function must depend on base coordinates only".into(),
            });
        }
        for pt in sample_points(&base, &WARPING_PLAN)? {
            let value = f.expr.eval(&pt.coords)?;
            if !(value > 0.0) {
                return Err(Error::NonPositiveWarping {
                    point: pt.coords,
                    value,
                });
            }
        }

        let d = m + n;
        let f2 = Expr::pow(f.expr.clone(), 2.0);
        let mut metric = vec![vec![Expr::Constant(0.0); d]; d];
        for i in 0..m {
            for j in i..m {
                metric[i][j] = base.metric_expr(i, j).clone();
            }
        }
        for i in 0..n {
            for j in i..n {
                let e = fiber.metric_expr(i, j);
                if !e.is_zero_constant() {
                    metric[m + i][m + j] = Expr::mul(f2.clone(), e.shifted(m));
                }
            }
        }
        let mut coords = base.coord_names().to_vec();
        coords.extend(fiber.coord_names().iter().cloned());
        let mut domain = base.domain().to_vec();
        domain.extend_from_slice(fiber.domain());

        let name = format!("{} x_f {}", base.name(), fiber.name());
        let mut product = ChartManifold::new(name, coords, metric, domain)?;
        let hint = if lorentzian {
            Some((n, 1))
        } else {
            match (base.signature_hint(), fiber.signature_hint()) {
                (Some((a, b)), Some((c, e))) => Some((a + c, b + e)),
                _ => None,
            }
        };
        if let Some((p, q)) = hint {
            product = product.with_signature(p, q);
        }
        Ok(WarpedProduct {
            base,
            fiber,
            warping: f,
            product,
            lorentzian,
        })
    }

    pub fn renamed(mut self, name: impl Into<String>) -> WarpedProduct {
        self.product = self.product.renamed(name);
        self
    }

    pub fn base(&self) -> &ChartManifold {
        &self.base
    }

    pub fn fiber(&self) -> &ChartManifold {
        &self.fiber
    }

    pub fn warping(&self) -> &ScalarField {
        &self.warping
    }

    pub fn product(&self) -> &ChartManifold {
        &self.product
    }

    pub fn is_lorentzian(&self) -> bool {
        self.lorentzian
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber.dim()
    }

    /// Splits a product point into its base and fiber parts.
    pub fn split(&self, pt: &Point) -> Result<(Point, Point)> {
        self.product.check_point(pt)?;
        let m = self.base_dim();
        Ok((
            Point::from(pt.coords[..m].to_vec()),
            Point::from(pt.coords[m..].to_vec()),
        ))
    }

    pub fn join(&self, b: &Point, x: &Point) -> Point {
        let mut coords = b.coords.clone();
        coords.extend_from_slice(&x.coords);
        Point::from(coords)
    }

    pub fn lift_base(&self, field: &VectorField) -> Result<LiftedField> {
        Ok(LiftedField {
            origin: Factor::Base,
            field: field.lift(0, self.product.dim())?,
        })
    }

    pub fn lift_fiber(&self, field: &VectorField) -> Result<LiftedField> {
        Ok(LiftedField {
            origin: Factor::Fiber,
            field: field.lift(self.base_dim(), self.product.dim())?,
        })
    }

    /// `lift(ξ_B) + lift(ξ_F)` on the product chart.
    pub fn split_field(&self, xi_b: &VectorField, xi_f: &VectorField) -> Result<VectorField> {
        Ok(VectorField::Sum(vec![
            (1.0, self.lift_base(xi_b)?.field),
            (1.0, self.lift_fiber(xi_f)?.field),
        ]))
    }

    /// Jet of `f` on the base chart.
    pub fn warping_jet(&self, b: &Point) -> Result<Jet2> {
        self.base.check_point(b)?;
        self.warping.expr.eval_jet2(&b.coords)
    }

    /// `f Δf + (n−1)‖∇f‖²` on the base, `n` the fiber dimension.
    pub fn tilde_f(&self, b: &Point) -> Result<f64> {
        let f = self.warping_jet(b)?.value();
        let (lap, norm) = crate::curvature::laplacian_gradnorm(&self.base, &self.warping, b)?;
        Ok(f * lap + (self.fiber_dim() as f64 - 1.0) * norm)
    }

    /// `ξ_B(f)` at a base point.
    pub fn derivative_along(&self, xi_b: &VectorField, b: &Point) -> Result<f64> {
        let jet = MetricJet::at(&self.base, b)?;
        let v = xi_b.eval(b, &jet)?;
        let fj = self.warping_jet(b)?;
        Ok(v.value.iter().zip(fj.grad()).map(|(a, g)| a * g).sum())
    }

    /// Largest `|∂f|` over the base sample; `f` counts as constant when this
    /// is within `tol`.
    pub fn warping_variation(&self, plan: &SamplePlan) -> Result<f64> {
        let pts = sample_points(&self.base, plan)?;
        worst(&pts, |b| Ok(max_abs(self.warping_jet(b)?.grad().iter().copied())))
    }

    fn require_riemannian(&self, plan: &SamplePlan) -> Result<()> {
        if self.lorentzian {
            return Err(Error::Signature(
                "identity is stated for Riemannian factors only".into(),
            ));
        }
        for (chart, label) in [(&self.base, "base"), (&self.fiber, "fiber")] {
            for pt in sample_points(chart, plan)? {
                if !chart.is_riemannian_at(&pt.coords)? {
                    return Err(Error::Signature(format!(
                        "{label} `{}` is not Riemannian at {:?}",
                        chart.name(),
                        pt.coords
                    )));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn check_riemannian(&self, plan: &SamplePlan) -> Result<()> {
        self.require_riemannian(plan)
    }

    /// Residuals of the four warped-product connection and Ricci identities
    /// at sampled product points, for coordinate lifts `X, Y` (base) and
    /// `U, V` (fiber).
    pub fn verify_identities(&self, plan: &SamplePlan, tol: f64) -> Result<SuiteReport> {
        self.require_riemannian(plan)?;
        let (m, n) = (self.base_dim(), self.fiber_dim());
        let nf = n as f64;
        let pts = sample_points(&self.product, plan)?;
        let mut worst_res = [0.0f64; 4];
        for pt in &pts {
            let (b, x) = self.split(pt)?;
            let geo = Geometry::at(&self.product, pt)?;
            let geo_b = Geometry::at(&self.base, &b)?;
            let geo_f = Geometry::at(&self.fiber, &x)?;
            let fj = self.warping_jet(&b)?;
            let f = fj.value();
            let hf = geo_b.hessian(&self.warping, &b)?;
            let (lap, norm) = geo_b.laplacian_gradnorm(&self.warping, &b)?;

            // (1) D_X U = D_U X = (X f / f) U
            let mut r1 = Vec::new();
            for a in 0..m {
                for mu in m..m + n {
                    for k in 0..m + n {
                        let expect = if k == mu { fj.grad()[a] / f } else { 0.0 };
                        r1.push(geo.christoffel.get(k, a, mu) - expect);
                        r1.push(geo.christoffel.get(k, mu, a) - expect);
                    }
                }
            }
            // (2) Ric(X, U) = 0
            let r2 = (0..m).flat_map(|a| (m..m + n).map(move |mu| (a, mu)));
            let r2: Vec<f64> = r2.map(|(a, mu)| geo.ricci[(a, mu)]).collect();
            // (3) Ric(X, Y) = Ric^B(X, Y) − (n/f) H^f(X, Y)
            let r3 = DMatrix::from_fn(m, m, |a, c| {
                geo.ricci[(a, c)] - geo_b.ricci[(a, c)] + nf / f * hf[(a, c)]
            });
            // (4) Ric(U, V) = Ric^F(U, V) − (Δf/f + (n−1)‖∇f‖²/f²) g(U, V)
            let coef = lap / f + (nf - 1.0) * norm / (f * f);
            let r4 = DMatrix::from_fn(n, n, |i, j| {
                geo.ricci[(m + i, m + j)] - geo_f.ricci[(i, j)] + coef * geo.g()[(m + i, m + j)]
            });
            for (slot, r) in worst_res.iter_mut().zip([
                max_abs(r1),
                max_abs(r2),
                max_abs(r3.iter().copied()),
                max_abs(r4.iter().copied()),
            ]) {
                *slot = if slot.is_nan() || r.is_nan() { f64::NAN } else { slot.max(r) };
            }
        }
        let mut report = SuiteReport::new(
            format!("warped-identities:{}", self.product.name()),
            Provenance {
                seed: plan.seed,
                count: plan.count,
                n_conv: None,
            },
        );
        report
            .push(Check::measured("connection-mixed", worst_res[0], tol))
            .push(Check::measured("ricci-mixed", worst_res[1], tol))
            .push(Check::measured("ricci-base", worst_res[2], tol))
            .push(
                Check::measured("ricci-fiber", worst_res[3], tol)
                    .with_note("g(U, V) read as the product metric on the fiber block"),
            );
        Ok(report)
    }

    /// `L_ξ g − [L^B_{ξ_B} g_B ⊕ (f² L^F_{ξ_F} g_F + 2f ξ_B(f) g_F)]` at a
    /// product point, with `ξ = lift(ξ_B) + lift(ξ_F)`.
    pub fn lie_split_residual(
        &self,
        xi_b: &VectorField,
        xi_f: &VectorField,
        pt: &Point,
    ) -> Result<DMatrix<f64>> {
        let (b, x) = self.split(pt)?;
        let m = self.base_dim();
        let xi = self.split_field(xi_b, xi_f)?;
        let mut out = lie_derivative_metric(&self.product, &xi, pt)?;
        let lb = lie_derivative_metric(&self.base, xi_b, &b)?;
        let lf = lie_derivative_metric(&self.fiber, xi_f, &x)?;
        let f = self.warping_jet(&b)?.value();
        let xbf = self.derivative_along(xi_b, &b)?;
        let gf = self.fiber.metric_at(&x.coords)?;
        let rhs_f = lf * (f * f) + gf * (2.0 * f * xbf);
        let mut view = out.view_mut((0, 0), (m, m));
        view -= lb;
        let n = self.fiber_dim();
        let mut view = out.view_mut((m, m), (n, n));
        view -= rhs_f;
        Ok(out)
    }

    /// The base operator identity
    /// `L^B_{ξ_B} g_B − (2n/f) H^f = L^B_{ξ_B − n∇ln f} g_B` at a base point.
    ///
    /// Returns `(as_stated, corrected)`: the second adds the
    /// `(2n/f²) df ⊗ df` term that the exact expansion of
    /// `L_{∇ ln f} g = 2 H^{ln f}` produces.
    pub fn operator_identity_residual(
        &self,
        xi_b: &VectorField,
        b: &Point,
    ) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let geo = Geometry::at(&self.base, b)?;
        let nf = self.fiber_dim() as f64;
        let fj = self.warping_jet(b)?;
        let f = fj.value();
        let lhs = geo.lie_derivative_metric(xi_b, b)? - geo.hessian(&self.warping, b)? * (2.0 * nf / f);
        let shifted = VectorField::Sum(vec![
            (1.0, xi_b.clone()),
            (-nf, VectorField::Gradient(self.warping.expr.clone().ln())),
        ]);
        let rhs = geo.lie_derivative_metric(&shifted, b)?;
        let stated = lhs - rhs;
        let m = self.base_dim();
        let df = DMatrix::from_fn(m, m, |i, j| fj.grad()[i] * fj.grad()[j]);
        let corrected = &stated + df * (2.0 * nf / (f * f));
        Ok((stated, corrected))
    }

    /// Largest mixed Ricci entry `|Ric(X, U)|` over sampled product points.
    /// Works for either signature.
    pub fn mixed_ricci(&self, plan: &SamplePlan) -> Result<f64> {
        let (m, d) = (self.base_dim(), self.product.dim());
        let pts = sample_points(&self.product, plan)?;
        worst(&pts, |pt| {
            let ric = Geometry::at(&self.product, pt)?.ricci;
            Ok(max_abs((0..m).flat_map(|a| (m..d).map(move |mu| (a, mu))).map(|(a, mu)| ric[(a, mu)])))
        })
    }

    /// Lie-split and operator-identity residuals over sampled points.
    pub fn lie_split_suite(
        &self,
        xi_b: &VectorField,
        xi_f: &VectorField,
        plan: &SamplePlan,
        tol: f64,
    ) -> Result<SuiteReport> {
        let pts = sample_points(&self.product, plan)?;
        let split = worst(&pts, |pt| {
            Ok(max_abs(self.lie_split_residual(xi_b, xi_f, pt)?.iter().copied()))
        })?;
        let mut stated: f64 = 0.0;
        let mut corrected: f64 = 0.0;
        for pt in &pts {
            let (b, _) = self.split(pt)?;
            let (s, c) = self.operator_identity_residual(xi_b, &b)?;
            stated = stated.max(max_abs(s.iter().copied()));
            corrected = corrected.max(max_abs(c.iter().copied()));
        }
        let mut report = SuiteReport::new(
            format!("lie-split:{}", self.product.name()),
            Provenance {
                seed: plan.seed,
                count: plan.count,
                n_conv: None,
            },
        );
        report
            .push(Check::measured("lie-split", split, tol))
            .push(Check::measured("operator-identity", stated, tol))
            .push(
                Check::measured("operator-identity-corrected", corrected, tol)
                    .with_note("includes the (2n/f^2) df(x)df term"),
            );
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn line(name: &str, coord: &str, lo: f64, hi: f64) -> ChartManifold {
        ChartManifold::diagonal(name, &[coord], &["1"], &[(lo, hi)]).unwrap()
    }

    fn sphere_warped() -> WarpedProduct {
        let base = line("B", "theta", 0.0, PI);
        let fiber = line("S1", "phi", 0.0, 2.0 * PI);
        let f = base.parse_scalar("sin(theta)").unwrap();
        build_warped(base, fiber, f).unwrap()
    }

    fn polar() -> WarpedProduct {
        let base = line("I", "t", 0.2, 5.0);
        let fiber = line("S1", "phi", 0.0, 2.0 * PI);
        let f = base.parse_scalar("t").unwrap();
        build_warped(base, fiber, f).unwrap()
    }

    #[test]
    fn polar_metric_blocks() {
        let wp = polar();
        let g = wp.product().metric_at(&[2.0, 1.0]).unwrap();
        assert_eq!(g, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]));
        assert!(wp.product().metric_expr(0, 1).is_zero_constant());
        assert_eq!(wp.product().coord_names(), &["t".to_string(), "phi".to_string()]);
    }

    #[test]
    fn sphere_metric_blocks() {
        let wp = sphere_warped();
        let g = wp.product().metric_at(&[0.7, 2.0]).unwrap();
        assert!((g[(1, 1)] - 0.7f64.sin().powi(2)).abs() < 1e-15);
        assert_eq!(g[(0, 0)], 1.0);
    }

    #[test]
    fn negative_warping_rejected() {
        let base = line("I", "t", 0.0, 1.0);
        let fiber = line("R", "x", -1.0, 1.0);
        let f = base.parse_scalar("t - 5").unwrap();
        assert!(matches!(
            build_warped(base, fiber, f),
            Err(Error::NonPositiveWarping { .. })
        ));
    }

    #[test]
    fn shared_coordinate_rejected() {
        let base = line("I", "t", 0.0, 1.0);
        let fiber = line("J", "t", 0.0, 1.0);
        let f = base.parse_scalar("1").unwrap();
        assert_eq!(build_warped(base, fiber, f).unwrap_err(), Error::NameClash("t".into()));
    }

    #[test]
    fn minkowski_grw_is_flat() {
        let fiber = ChartManifold::diagonal("E2", &["x", "y"], &["1", "1"], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let f = ScalarField::new(Expr::Constant(1.0));
        let wp = build_grw("t", iv, f, fiber).unwrap();
        let g = wp.product().metric_at(&[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(g, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0, 1.0])));
        assert_eq!(wp.product().signature_hint(), Some((2, 1)));
        let geo = Geometry::at(wp.product(), &Point::from(vec![0.1, 0.2, 0.3])).unwrap();
        assert_eq!(max_abs(geo.riemann.values().iter().copied()), 0.0);
    }

    #[test]
    fn milne_chart_is_ricci_flat() {
        let fiber =
            ChartManifold::diagonal("H2", &["x", "y"], &["1/y^2", "1/y^2"], &[(-1.0, 1.0), (0.5, 2.0)])
                .unwrap();
        let iv = Interval::new(0.5, 3.0).unwrap();
        let f = ScalarField::new(Expr::coord(0, "t"));
        let wp = build_grw("t", iv, f, fiber).unwrap();
        for pt in sample_points(wp.product(), &SamplePlan::default()).unwrap() {
            let ric = crate::curvature::ricci(wp.product(), &pt).unwrap();
            assert!(max_abs(ric.iter().copied()) < 1e-8);
        }
    }

    #[test]
    fn tilde_f_examples() {
        let base = line("I", "t", 0.1, 3.0);
        let fiber = ChartManifold::diagonal("E2", &["x", "y"], &["1", "1"], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let f = base.parse_scalar("t").unwrap();
        let wp = build_warped(base.clone(), fiber.clone(), f).unwrap();
        assert!((wp.tilde_f(&Point::from(vec![1.3])).unwrap() - 1.0).abs() < 1e-15);

        let c = base.parse_scalar("3").unwrap();
        let wp = build_warped(base, fiber, c).unwrap();
        assert_eq!(wp.tilde_f(&Point::from(vec![1.3])).unwrap(), 0.0);

        let wp = sphere_warped();
        let th: f64 = 0.9;
        let v = wp.tilde_f(&Point::from(vec![th])).unwrap();
        assert!((v + th.sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn identities_on_sphere_and_polar() {
        for wp in [sphere_warped(), polar()] {
            let r = wp.verify_identities(&SamplePlan::default(), 1e-8).unwrap();
            assert_eq!(r.checks.len(), 4);
            assert!(r.pass(), "{r:?}");
        }
        let r = polar().verify_identities(&SamplePlan::default(), 1e-10).unwrap();
        assert!(r.check("ricci-fiber").unwrap().passed());
    }

    #[test]
    fn identities_reject_lorentzian() {
        let fiber = line("R", "x", -1.0, 1.0);
        let wp = build_grw("t", Interval::new(0.5, 2.0).unwrap(), ScalarField::new(Expr::coord(0, "t")), fiber).unwrap();
        assert!(matches!(
            wp.verify_identities(&SamplePlan::default(), 1e-8),
            Err(Error::Signature(_))
        ));
        assert!(wp.mixed_ricci(&SamplePlan::default()).unwrap() < 1e-9);
    }

    #[test]
    fn lie_split_examples() {
        let zero1 = VectorField::zero(1);
        let wp = sphere_warped();
        let d_theta = wp.base().parse_vector(&["1"]).unwrap();
        let pt = Point::from(vec![0.8, 1.0]);
        assert_eq!(max_abs(wp.lie_split_residual(&zero1, &zero1, &pt).unwrap().iter().copied()), 0.0);
        let r = wp.lie_split_residual(&d_theta, &zero1, &pt).unwrap();
        assert!(max_abs(r.iter().copied()) < 1e-10);
        // both sides are diag(0, 2 sinθ cosθ)
        let lhs = lie_derivative_metric(wp.product(), &wp.lift_base(&d_theta).unwrap().field, &pt).unwrap();
        assert!((lhs[(1, 1)] - 2.0 * 0.8f64.sin() * 0.8f64.cos()).abs() < 1e-15);

        let wp = polar();
        let radial = wp.base().parse_vector(&["t"]).unwrap();
        let rot = wp.fiber().parse_vector(&["1"]).unwrap();
        let r = wp.lie_split_residual(&radial, &rot, &Point::from(vec![1.7, 0.3])).unwrap();
        assert!(max_abs(r.iter().copied()) < 1e-10);
    }

    #[test]
    fn operator_identity_needs_the_square_term() {
        let wp = polar();
        let radial = wp.base().parse_vector(&["t"]).unwrap();
        let b = Point::from(vec![2.0]);
        let (stated, corrected) = wp.operator_identity_residual(&radial, &b).unwrap();
        // n = 1, f = t: the missing term is (2/t²) dt⊗dt
        assert!((stated[(0, 0)] + 0.5).abs() < 1e-14);
        assert!(corrected[(0, 0)].abs() < 1e-14);

        let base = line("I", "t", 0.1, 2.0);
        let fiber = line("R", "x", -1.0, 1.0);
        let wp = build_warped(base.clone(), fiber, base.parse_scalar("2").unwrap()).unwrap();
        let (stated, _) = wp.operator_identity_residual(&radial, &Point::from(vec![1.0])).unwrap();
        assert_eq!(max_abs(stated.iter().copied()), 0.0);
    }
}
