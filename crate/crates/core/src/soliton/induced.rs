//! Solitons induced on the base and fiber of a warped-product soliton.

use nalgebra::DMatrix;

use super::{
    gradient_equivalence_defect, gradient_soliton_residual_mu, soliton_residual_mu,
    worst_gradient_soliton, worst_soliton,
};
use crate::curvature::Geometry;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::manifold::{sample_points, Point, SamplePlan, ScalarField, SolitonParams, VectorField};
use crate::report::{max_abs, Check, Provenance, SuiteReport};
use crate::warped::WarpedProduct;

/// How many points of the other factor anchor a frozen potential.
const ANCHORS: usize = 4;

/// The fiber soliton data at one fixed base point.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberAnchor {
    pub base_point: Point,
    pub warping: f64,
    /// `ξ_B(f)`
    pub derivative: f64,
    pub tilde_f: f64,
    /// `μ f² − 2 f ξ_B(f) + 2 f̃`
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InducedSolitons {
    /// `ξ_B − n ∇ ln f` on the base chart.
    pub base_field: VectorField,
    pub base_mu: f64,
    /// `ξ_F`; the fiber soliton field at an anchor is `f(b)² ξ_F`.
    pub fiber_field: VectorField,
    pub anchors: Vec<FiberAnchor>,
}

impl InducedSolitons {
    pub fn fiber_field_at(&self, anchor: &FiberAnchor) -> VectorField {
        self.fiber_field.clone().scaled(anchor.warping * anchor.warping)
    }

    /// `max_b μ_F(b) − min_b μ_F(b)` over the anchors.
    pub fn fiber_mu_spread(&self) -> f64 {
        let lo = self.anchors.iter().map(|a| a.mu).fold(f64::INFINITY, f64::min);
        let hi = self.anchors.iter().map(|a| a.mu).fold(f64::NEG_INFINITY, f64::max);
        if self.anchors.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }
}

fn provenance(plan: &SamplePlan, params: &SolitonParams) -> Provenance {
    Provenance {
        seed: plan.seed,
        count: plan.count,
        n_conv: Some(params.n_conv),
    }
}

fn fold_max(acc: &mut f64, r: f64) {
    *acc = if acc.is_nan() || r.is_nan() { f64::NAN } else { acc.max(r) };
}

/// `L^B_{ξ_B} g_B − (2n/f) H^f + 2 Ric^B − μ g_B`, the base block of the
/// product soliton equation rewritten with base quantities only.
fn base_block_residual(
    wp: &WarpedProduct,
    lie_or_hessian: DMatrix<f64>,
    geo_b: &Geometry,
    b: &Point,
    mu: f64,
) -> Result<DMatrix<f64>> {
    let nf = wp.fiber_dim() as f64;
    let f = wp.warping_jet(b)?.value();
    let hf = geo_b.hessian(wp.warping(), b)?;
    Ok(lie_or_hessian - hf * (2.0 * nf / f) + &geo_b.ricci * 2.0 - geo_b.g() * mu)
}

/// Builds the base soliton `(g_B, μ, ξ_B − n∇ln f)` and the fiber solitons
/// `(g_F, μ_F(b), f(b)² ξ_F)` of a warped-product soliton and measures both.
///
/// Fails with [`Error::HypothesisFailed`] when `(M, g, μ, ξ)` is not a
/// soliton within `tol` at the sampled points.
pub fn induced_solitons(
    wp: &WarpedProduct,
    xi_b: &VectorField,
    xi_f: &VectorField,
    params: &SolitonParams,
    plan: &SamplePlan,
    tol: f64,
) -> Result<(InducedSolitons, SuiteReport)> {
    wp.check_riemannian(plan)?;
    let mu = params.mu();
    let nf = wp.fiber_dim() as f64;
    let pts = sample_points(wp.product(), plan)?;
    let xi = wp.split_field(xi_b, xi_f)?;
    let hyp = worst_soliton(wp.product(), &xi, mu, &pts)?;
    if !(hyp <= tol) {
        return Err(Error::HypothesisFailed {
            residual: hyp,
            reason: format!("input is not a soliton on `{}`", wp.product().name()),
        });
    }

    let base_field = VectorField::Sum(vec![
        (1.0, xi_b.clone()),
        (-nf, VectorField::Gradient(wp.warping().expr.clone().ln())),
    ]);
    let mut induced = InducedSolitons {
        base_field,
        base_mu: mu,
        fiber_field: xi_f.clone(),
        anchors: Vec::with_capacity(pts.len()),
    };
    let (mut base_stated, mut base_corrected, mut fiber) = (0.0, 0.0, 0.0);
    for pt in &pts {
        let (b, x) = wp.split(pt)?;
        let stated = soliton_residual_mu(wp.base(), &induced.base_field, mu, &b)?;
        fold_max(&mut base_stated, max_abs(stated.iter().copied()));

        let geo_b = Geometry::at(wp.base(), &b)?;
        let lie_b = geo_b.lie_derivative_metric(xi_b, &b)?;
        let corrected = base_block_residual(wp, lie_b, &geo_b, &b, mu)?;
        fold_max(&mut base_corrected, max_abs(corrected.iter().copied()));

        let f = wp.warping_jet(&b)?.value();
        let derivative = wp.derivative_along(xi_b, &b)?;
        let tilde_f = wp.tilde_f(&b)?;
        let anchor = FiberAnchor {
            base_point: b,
            warping: f,
            derivative,
            tilde_f,
            mu: mu * f * f - 2.0 * f * derivative + 2.0 * tilde_f,
        };
        let r = soliton_residual_mu(wp.fiber(), &induced.fiber_field_at(&anchor), anchor.mu, &x)?;
        fold_max(&mut fiber, max_abs(r.iter().copied()));
        induced.anchors.push(anchor);
    }

    let mut report = SuiteReport::new(
        format!("induced:{}", wp.product().name()),
        provenance(plan, params),
    );
    report
        .push(Check::measured("product-soliton", hyp, tol))
        .push(Check::measured("base-soliton", base_stated, tol))
        .push(
            Check::measured("base-soliton-block-form", base_corrected, tol)
                .with_note("L_xiB g_B - (2n/f) H^f + 2 Ric^B - mu g_B"),
        )
        .push(Check::measured("fiber-soliton", fiber, tol))
        .push(Check::measured("fiber-mu-spread", induced.fiber_mu_spread(), tol));
    Ok((induced, report))
}

/// Freezes the coordinates `offset..offset + values.len()` of `e` and
/// renumbers the remaining block to start at zero.
fn freeze(e: &Expr, offset: usize, values: &[f64], keep: std::ops::Range<usize>) -> Expr {
    let mut slots = vec![None; offset + values.len()];
    for (i, v) in values.iter().enumerate() {
        slots[offset + i] = Some(*v);
    }
    e.substitute(&slots)
        .map_coords(&|i, name| Expr::coord(i - keep.start, name))
}

/// Checks the base and fiber gradient solitons induced by a gradient soliton
/// `(M, g, μ, φ)` on a warped product. The fiber check applies only when the
/// warping function is constant and is SKIPPED otherwise.
pub fn gradient_induced_solitons(
    wp: &WarpedProduct,
    phi: &ScalarField,
    params: &SolitonParams,
    plan: &SamplePlan,
    tol: f64,
) -> Result<SuiteReport> {
    wp.check_riemannian(plan)?;
    let mu = params.mu();
    let (m, n) = (wp.base_dim(), wp.fiber_dim());
    let nf = n as f64;
    let pts = sample_points(wp.product(), plan)?;
    let hyp = worst_gradient_soliton(wp.product(), phi, mu, &pts)?;
    if !(hyp <= tol) {
        return Err(Error::HypothesisFailed {
            residual: hyp,
            reason: format!("input is not a gradient soliton on `{}`", wp.product().name()),
        });
    }
    let split = pts.iter().map(|p| wp.split(p)).collect::<Result<Vec<_>>>()?;

    let fiber_anchors: Vec<Point> = sample_points(wp.fiber(), plan)?.into_iter().take(ANCHORS).collect();
    let (mut stated, mut corrected) = (0.0, 0.0);
    for x0 in &fiber_anchors {
        let phi_b = freeze(&phi.expr, m, &x0.coords, 0..m);
        let shifted = ScalarField::new(Expr::sub(
            phi_b.clone(),
            Expr::mul(Expr::Constant(nf), wp.warping().expr.clone().ln()),
        ));
        let phi_b = ScalarField::new(phi_b);
        for (b, _) in &split {
            let r = gradient_soliton_residual_mu(wp.base(), &shifted, mu, b)?;
            fold_max(&mut stated, max_abs(r.iter().copied()));
            let geo_b = Geometry::at(wp.base(), b)?;
            let h = geo_b.hessian(&phi_b, b)? * 2.0;
            let r = base_block_residual(wp, h, &geo_b, b, mu)?;
            fold_max(&mut corrected, max_abs(r.iter().copied()));
        }
    }

    let mut report = SuiteReport::new(
        format!("gradient-induced:{}", wp.product().name()),
        provenance(plan, params),
    );
    report
        .push(Check::measured("product-gradient-soliton", hyp, tol))
        .push(Check::measured("base-gradient-soliton", stated, tol))
        .push(
            Check::measured("base-gradient-soliton-block-form", corrected, tol)
                .with_note("2 H^phiB - (2n/f) H^f + 2 Ric^B - mu g_B"),
        );

    let variation = wp.warping_variation(plan)?;
    if variation > tol {
        report.push(Check::skipped(
            "fiber-gradient-soliton",
            tol,
            format!("warping function is not constant (|df| up to {variation:.3e})"),
        ));
    } else {
        let base_anchors: Vec<Point> = sample_points(wp.base(), plan)?.into_iter().take(ANCHORS).collect();
        let mut fiber = 0.0;
        for b0 in &base_anchors {
            let phi_f = ScalarField::new(freeze(&phi.expr, 0, &b0.coords, m..m + n));
            let f = wp.warping_jet(b0)?.value();
            for (_, x) in &split {
                let r = gradient_soliton_residual_mu(wp.fiber(), &phi_f, mu * f * f, x)?;
                fold_max(&mut fiber, max_abs(r.iter().copied()));
            }
        }
        report.push(Check::measured("fiber-gradient-soliton", fiber, tol));
    }
    let eq = gradient_equivalence_defect(wp.product(), phi, mu, &pts)?;
    report.push(Check::measured("equivalence", eq, tol.min(1e-9)));
    Ok(report)
}
