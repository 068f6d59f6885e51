//! Conformal Ricci soliton residuals, special-field classification, Einstein
//! fits, induced factor solitons and the structural suites built on them.
//!
//! All soliton checks use the un-divided form `L_ξ g + 2 Ric − μ g`.

mod induced;
mod suites;

use nalgebra::DMatrix;

pub use induced::{gradient_induced_solitons, induced_solitons, FiberAnchor, InducedSolitons};
pub use suites::{
    concircular_suite, concurrent_suite, conformal_einstein_suite, grw_suite,
    killing_einstein_suite,
};

use crate::curvature::{lie_from_jet, Geometry};
use crate::error::Result;
use crate::manifold::{
    classify_lambda, sample_points, ChartManifold, Point, SamplePlan, ScalarField, SolitonKind,
    SolitonParams, VectorField,
};
use crate::report::max_abs;

/// Default tolerance of [`classify_field`].
pub const CLASSIFY_TOLERANCE: f64 = 1e-8;

fn residual_from(geo: &Geometry, lie: DMatrix<f64>, mu: f64) -> DMatrix<f64> {
    let r = lie + &geo.ricci * 2.0 - geo.g() * mu;
    (&r + r.transpose()) * 0.5
}

/// `L_ξ g + 2 Ric − μ g` at `pt`.
pub fn soliton_residual(
    m: &ChartManifold,
    xi: &VectorField,
    params: &SolitonParams,
    pt: &Point,
) -> Result<DMatrix<f64>> {
    soliton_residual_mu(m, xi, params.mu(), pt)
}

/// [`soliton_residual`] with the constant `μ` given directly.
pub fn soliton_residual_mu(
    m: &ChartManifold,
    xi: &VectorField,
    mu: f64,
    pt: &Point,
) -> Result<DMatrix<f64>> {
    let geo = Geometry::at(m, pt)?;
    let lie = geo.lie_derivative_metric(xi, pt)?;
    Ok(residual_from(&geo, lie, mu))
}

/// `2 H^φ + 2 Ric − μ g` at `pt`.
pub fn gradient_soliton_residual(
    m: &ChartManifold,
    phi: &ScalarField,
    params: &SolitonParams,
    pt: &Point,
) -> Result<DMatrix<f64>> {
    gradient_soliton_residual_mu(m, phi, params.mu(), pt)
}

pub fn gradient_soliton_residual_mu(
    m: &ChartManifold,
    phi: &ScalarField,
    mu: f64,
    pt: &Point,
) -> Result<DMatrix<f64>> {
    let geo = Geometry::at(m, pt)?;
    let h = geo.hessian(phi, pt)?;
    Ok(residual_from(&geo, h * 2.0, mu))
}

/// Largest entry of [`soliton_residual`] over a set of points.
pub(crate) fn worst_soliton(
    m: &ChartManifold,
    xi: &VectorField,
    mu: f64,
    pts: &[Point],
) -> Result<f64> {
    crate::report::worst(pts, |p| Ok(max_abs(soliton_residual_mu(m, xi, mu, p)?.iter().copied())))
}

pub(crate) fn worst_gradient_soliton(
    m: &ChartManifold,
    phi: &ScalarField,
    mu: f64,
    pts: &[Point],
) -> Result<f64> {
    crate::report::worst(pts, |p| {
        Ok(max_abs(gradient_soliton_residual_mu(m, phi, mu, p)?.iter().copied()))
    })
}

/// `max |soliton_residual(∇φ) − gradient_soliton_residual(φ)|` over `pts`.
pub fn gradient_equivalence_defect(
    m: &ChartManifold,
    phi: &ScalarField,
    mu: f64,
    pts: &[Point],
) -> Result<f64> {
    let grad = VectorField::Gradient(phi.expr.clone());
    crate::report::worst(pts, |p| {
        let a = soliton_residual_mu(m, &grad, mu, p)?;
        let b = gradient_soliton_residual_mu(m, phi, mu, p)?;
        Ok(max_abs((a - b).iter().copied()))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    Killing,
    /// `L_X g = σ g`, one `σ̂` per sample point.
    Conformal { sigma: Vec<f64> },
    /// `∇_Y X = α Y`, one `α̂` per sample point.
    Concircular { alpha: Vec<f64> },
    Concurrent,
    Unclassified,
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::Killing => "killing",
            FieldKind::Conformal { .. } => "conformal",
            FieldKind::Concircular { .. } => "concircular",
            FieldKind::Concurrent => "concurrent",
            FieldKind::Unclassified => "unclassified",
        }
    }
}

/// Per-point estimates and residuals behind [`classify_field`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// `tr(g⁻¹ L_X g) / d`
    pub sigma: f64,
    /// `tr(A) / d` with `A^k_i = (∇_{∂_i} X)^k`
    pub alpha: f64,
    pub killing: f64,
    pub conformal: f64,
    pub concircular: f64,
    pub concurrent: f64,
}

pub fn field_sample(m: &ChartManifold, x: &VectorField, pt: &Point) -> Result<FieldSample> {
    let geo = Geometry::at(m, pt)?;
    field_sample_from(&geo, x, pt)
}

pub(crate) fn field_sample_from(geo: &Geometry, x: &VectorField, pt: &Point) -> Result<FieldSample> {
    let d = geo.dim();
    let v = x.eval(pt, &geo.jet)?;
    let lie = lie_from_jet(&geo.jet, &v.value, &v.jacobian);
    let sigma = geo.jet.g_inv.component_mul(&lie).sum() / d as f64;
    let a = DMatrix::from_fn(d, d, |k, i| {
        v.jacobian[(k, i)] + (0..d).map(|j| geo.christoffel.get(k, i, j) * v.value[j]).sum::<f64>()
    });
    let alpha = a.trace() / d as f64;
    let id = DMatrix::<f64>::identity(d, d);
    Ok(FieldSample {
        sigma,
        alpha,
        killing: max_abs(lie.iter().copied()),
        conformal: max_abs((&lie - geo.g() * sigma).iter().copied()),
        concircular: max_abs((&a - &id * alpha).iter().copied()),
        concurrent: max_abs((&a - &id).iter().copied()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldClass {
    pub kind: FieldKind,
    /// Residual of the reported kind (the conformal residual when
    /// unclassified).
    pub max_residual: f64,
    pub samples: Vec<FieldSample>,
}

impl FieldClass {
    fn worst(&self, pick: impl Fn(&FieldSample) -> f64) -> f64 {
        max_abs(self.samples.iter().map(pick))
    }

    pub fn killing_residual(&self) -> f64 {
        self.worst(|s| s.killing)
    }

    pub fn conformal_residual(&self) -> f64 {
        self.worst(|s| s.conformal)
    }

    pub fn concircular_residual(&self) -> f64 {
        self.worst(|s| s.concircular)
    }

    pub fn concurrent_residual(&self) -> f64 {
        self.worst(|s| s.concurrent)
    }
}

/// Classifies `x` as the most specific of concurrent, killing, concircular
/// and conformal whose residual is within `tol` at every sample.
pub fn classify_field(
    m: &ChartManifold,
    x: &VectorField,
    plan: &SamplePlan,
    tol: f64,
) -> Result<FieldClass> {
    let samples = sample_points(m, plan)?
        .iter()
        .map(|pt| field_sample(m, x, pt))
        .collect::<Result<Vec<_>>>()?;
    let mut class = FieldClass {
        kind: FieldKind::Unclassified,
        max_residual: 0.0,
        samples,
    };
    let ladder = [
        class.concurrent_residual(),
        class.killing_residual(),
        class.concircular_residual(),
        class.conformal_residual(),
    ];
    let (kind, residual) = if ladder[0] <= tol {
        (FieldKind::Concurrent, ladder[0])
    } else if ladder[1] <= tol {
        (FieldKind::Killing, ladder[1])
    } else if ladder[2] <= tol {
        let alpha = class.samples.iter().map(|s| s.alpha).collect();
        (FieldKind::Concircular { alpha }, ladder[2])
    } else if ladder[3] <= tol {
        let sigma = class.samples.iter().map(|s| s.sigma).collect();
        (FieldKind::Conformal { sigma }, ladder[3])
    } else {
        (FieldKind::Unclassified, ladder[3])
    };
    class.kind = kind;
    class.max_residual = residual;
    Ok(class)
}

/// Trace-averaged Einstein constant `c` and `max ‖Ric − c g‖∞`.
pub fn einstein_fit(m: &ChartManifold, plan: &SamplePlan) -> Result<(f64, f64)> {
    let geos = sample_points(m, plan)?
        .iter()
        .map(|pt| Geometry::at(m, pt))
        .collect::<Result<Vec<_>>>()?;
    let d = m.dim() as f64;
    let c = geos.iter().map(|g| g.scalar / d).sum::<f64>() / geos.len() as f64;
    let residual = max_abs(
        geos.iter()
            .map(|g| max_abs((&g.ricci - g.g() * c).iter().copied())),
    );
    Ok((c, residual))
}

/// `(2ρ − μ) f² + 2 f ξ_B(f) + 2β + 2(1 − n) k²`; zero exactly when the
/// warping function satisfies the quadratic condition for the product to be
/// a soliton.
pub fn warping_quadratic_residual(
    f: f64,
    xi_b_f: f64,
    rho: f64,
    mu: f64,
    beta: f64,
    k: f64,
    n: u32,
) -> f64 {
    (2.0 * rho - mu) * f * f + 2.0 * f * xi_b_f + 2.0 * beta + 2.0 * (1.0 - f64::from(n)) * k * k
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcircularLambda {
    pub lambda: f64,
    pub kind: SolitonKind,
    /// `p + 2α + 1/n`, which equals `2λ`.
    pub bracket: f64,
}

/// `λ = α + p/2 + 1/(2n)` with its shrinking/steady/expanding class.
///
/// A sum that cancels to within a few ulps of its terms counts as steady.
pub fn concircular_lambda(alpha: f64, pressure: f64, n: u32) -> ConcircularLambda {
    let n = f64::from(n.max(1));
    let terms = [alpha, pressure / 2.0, 1.0 / (2.0 * n)];
    let mut lambda: f64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    if lambda.abs() <= 4.0 * f64::EPSILON * scale {
        lambda = 0.0;
    }
    ConcircularLambda {
        lambda,
        kind: classify_lambda(lambda),
        bracket: pressure + 2.0 * alpha + 1.0 / n,
    }
}
