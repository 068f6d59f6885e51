//! Suites for solitons whose vector field is Killing, conformal, concircular
//! or concurrent, and for gradient solitons on Robertson-Walker type
//! spacetimes.

use nalgebra::DMatrix;

use super::{
    classify_field, concircular_lambda, einstein_fit, field_sample_from,
    gradient_equivalence_defect, worst_soliton, FieldClass,
};
use crate::curvature::{Geometry, MetricJet};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::manifold::{
    sample_points, ChartManifold, Point, SamplePlan, ScalarField, SolitonParams, VectorField,
};
use crate::report::{max_abs, worst, Check, Provenance, SuiteReport};
use crate::warped::WarpedProduct;

fn report(kind: &str, target: &str, plan: &SamplePlan, params: &SolitonParams) -> SuiteReport {
    SuiteReport::new(
        format!("{kind}:{target}"),
        Provenance {
            seed: plan.seed,
            count: plan.count,
            n_conv: Some(params.n_conv),
        },
    )
}

fn hypothesis(residual: f64, tol: f64, reason: impl FnOnce() -> String) -> Result<()> {
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::HypothesisFailed {
            residual,
            reason: reason(),
        })
    }
}

/// `max_i |g_ij ξ^j − ∂_i(½ g(ξ, ξ))|`: zero iff `ξ` is the gradient of half
/// its squared length.
fn potential_defect(m: &ChartManifold, xi: &VectorField, pt: &Point) -> Result<f64> {
    let jet = MetricJet::at(m, pt)?;
    let v = xi.eval(pt, &jet)?;
    let d = m.dim();
    Ok(max_abs((0..d).map(|i| {
        let mut flat = 0.0;
        let mut dphi = 0.0;
        for j in 0..d {
            flat += jet.g[(i, j)] * v.value[j];
            for k in 0..d {
                dphi += 0.5 * jet.dg(i, j, k) * v.value[j] * v.value[k]
                    + jet.g[(j, k)] * v.jacobian[(j, i)] * v.value[k];
            }
        }
        flat - dphi
    })))
}

fn worst_ricci(m: &ChartManifold, pts: &[Point]) -> Result<f64> {
    worst(pts, |p| Ok(max_abs(Geometry::at(m, p)?.ricci.iter().copied())))
}

/// Concurrent soliton field on a warped product with constant warping.
///
/// Checks that `μ = 2` (so `λ = p/2 + 1/n + 1`), that the product, base and
/// fiber are Ricci flat, and that each of the three fields is the gradient of
/// half its squared length.
pub fn concurrent_suite(
    wp: &WarpedProduct,
    xi_b: &VectorField,
    xi_f: &VectorField,
    params: &SolitonParams,
    plan: &SamplePlan,
    tol: f64,
) -> Result<SuiteReport> {
    let cb = classify_field(wp.base(), xi_b, plan, tol)?;
    let cf = classify_field(wp.fiber(), xi_f, plan, tol)?;
    for (class, label) in [(&cb, "base"), (&cf, "fiber")] {
        hypothesis(class.concurrent_residual(), tol, || {
            format!("{label} field classifies as {}, not concurrent", class.kind.name())
        })?;
    }
    let variation = wp.warping_variation(plan)?;
    hypothesis(variation, tol, || "warping function is not constant".into())?;

    let xi = wp.split_field(xi_b, xi_f)?;
    let cp = classify_field(wp.product(), &xi, plan, tol)?;
    let pts = sample_points(wp.product(), plan)?;
    let split = pts.iter().map(|p| wp.split(p)).collect::<Result<Vec<_>>>()?;
    let bases: Vec<Point> = split.iter().map(|s| s.0.clone()).collect();
    let fibers: Vec<Point> = split.iter().map(|s| s.1.clone()).collect();
    let mu = params.mu();
    let n = f64::from(params.n_conv);

    let mut r = report("concurrent", wp.product().name(), plan, params);
    r.push(Check::measured("concurrent-base", cb.concurrent_residual(), tol))
        .push(Check::measured("concurrent-fiber", cf.concurrent_residual(), tol))
        .push(Check::measured("concurrent-product", cp.concurrent_residual(), tol))
        .push(Check::measured("product-soliton", worst_soliton(wp.product(), &xi, mu, &pts)?, tol))
        .push(Check::measured("mu-equals-two", (mu - 2.0).abs(), tol))
        .push(Check::measured(
            "lambda-relation",
            (params.lambda - (params.pressure / 2.0 + 1.0 / n + 1.0)).abs(),
            tol,
        ))
        .push(Check::measured("ricci-product", worst_ricci(wp.product(), &pts)?, tol))
        .push(Check::measured("ricci-base", worst_ricci(wp.base(), &bases)?, tol))
        .push(Check::measured("ricci-fiber", worst_ricci(wp.fiber(), &fibers)?, tol))
        .push(Check::measured(
            "gradient-potential-product",
            worst(&pts, |p| potential_defect(wp.product(), &xi, p))?,
            tol,
        ))
        .push(Check::measured(
            "gradient-potential-base",
            worst(&bases, |p| potential_defect(wp.base(), xi_b, p))?,
            tol,
        ))
        .push(Check::measured(
            "gradient-potential-fiber",
            worst(&fibers, |p| potential_defect(wp.fiber(), xi_f, p))?,
            tol,
        ));
    Ok(r)
}

/// Gradient soliton with potential `φ(t)`, `φ' = f`, on `−dt² ⊕ f² g_F`.
///
/// Under this signature `grad φ = −f ∂_t`, so the field `ξ = f ∂_t` is the
/// gradient of `−φ` and `H^{−φ} = ḟ g`. The checks use that orientation:
/// (a) `φ' = f`, (b) `H^{−φ} = ḟ g`, (c) `L_ξ g = 2ḟ g`,
/// (d) `Ric = (λ − ḟ − p/2 − 1/n) g`, (e) Einstein when `f'' ≡ 0`.
pub fn grw_suite(
    wp: &WarpedProduct,
    phi: &ScalarField,
    params: &SolitonParams,
    plan: &SamplePlan,
    tol: f64,
) -> Result<SuiteReport> {
    if !wp.is_lorentzian() {
        return Err(Error::Signature(
            "suite needs a spacetime built with build_grw".into(),
        ));
    }
    let m = wp.product();
    let d = m.dim();
    let pts = sample_points(m, plan)?;
    let f_expr = &wp.warping().expr;

    let potential = worst(&pts, |p| {
        let phi_t = phi.expr.eval_jet2(&p.coords)?.grad()[0];
        Ok((phi_t - f_expr.eval(&p.coords)?).abs())
    })?;
    hypothesis(potential, tol, || "potential derivative differs from f".into())?;

    let minus_phi = ScalarField::new(Expr::unary(crate::expr::UnaryOp::Neg, phi.expr.clone()));
    let mut components = vec![Expr::Constant(0.0); d];
    components[0] = f_expr.clone();
    let xi = VectorField::Components(components);
    let grad = VectorField::Gradient(minus_phi.expr.clone());

    let n = f64::from(params.n_conv);
    let (mut is_grad, mut hess, mut lie, mut ric_rel, mut fdd) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in &pts {
        let geo = Geometry::at(m, p)?;
        let fj = f_expr.eval_jet2(&p.coords)?;
        let fdot = fj.grad()[0];
        fdd = fdd.max(fj.hess(0, 0).abs());
        let g = geo.g();
        let vg = grad.eval(p, &geo.jet)?;
        let vx = xi.eval(p, &geo.jet)?;
        is_grad = is_grad.max(max_abs(vg.value.iter().zip(&vx.value).map(|(a, b)| a - b)));
        let h = geo.hessian(&minus_phi, p)?;
        hess = hess.max(max_abs((h - g * fdot).iter().copied()));
        let l = geo.lie_derivative_metric(&xi, p)?;
        lie = lie.max(max_abs((l - g * (2.0 * fdot)).iter().copied()));
        let c = params.lambda - fdot - params.pressure / 2.0 - 1.0 / n;
        ric_rel = ric_rel.max(max_abs((&geo.ricci - g * c).iter().copied()));
    }

    let mut r = report("grw", m.name(), plan, params);
    r.push(Check::measured("potential", potential, tol))
        .push(
            Check::measured("field-is-gradient", is_grad, tol)
                .with_note("f d/dt is the gradient of -phi under -dt^2"),
        )
        .push(Check::measured("hessian", hess, tol).with_note("H^(-phi) = f' g"))
        .push(Check::measured("lie-derivative", lie, tol))
        .push(
            Check::measured("ricci-relation", ric_rel, tol)
                .with_note(format!("n_conv = {}", params.n_conv)),
        );
    if fdd <= tol {
        let (c, res) = einstein_fit(m, plan)?;
        r.push(
            Check::measured("einstein-branch", res, tol)
                .with_note(format!("affine warping, fitted c = {c:.6e}")),
        );
    } else {
        r.push(Check::skipped(
            "einstein-branch",
            tol,
            format!("warping is not affine (|f''| up to {fdd:.3e})"),
        ));
    }
    let eq = gradient_equivalence_defect(m, &minus_phi, params.mu(), &pts)?;
    r.push(Check::measured("equivalence", eq, tol.min(1e-9)));
    Ok(r)
}

fn require_killing(class: &FieldClass, label: &str, tol: f64) -> Result<()> {
    hypothesis(class.killing_residual(), tol, || {
        format!("{label} field classifies as {}, not killing", class.kind.name())
    })
}

/// Soliton on a warped product whose lifts are both Killing.
///
/// `L_ξ g` must reduce to `2 f ξ_B(f) g_F`; when `ξ_B(f) = 0` the product is
/// Einstein with constant `μ/2`. Otherwise the Einstein check is SKIPPED
/// with the size of the `2 f ξ_B(f) g_F` defect in its note.
pub fn killing_einstein_suite(
    wp: &WarpedProduct,
    xi_b: &VectorField,
    xi_f: &VectorField,
    params: &SolitonParams,
    plan: &SamplePlan,
    tol: f64,
) -> Result<SuiteReport> {
    wp.check_riemannian(plan)?;
    require_killing(&classify_field(wp.base(), xi_b, plan, tol)?, "base", tol)?;
    require_killing(&classify_field(wp.fiber(), xi_f, plan, tol)?, "fiber", tol)?;
    let m = wp.base_dim();
    let d = wp.product().dim();
    let xi = wp.split_field(xi_b, xi_f)?;
    let pts = sample_points(wp.product(), plan)?;

    let (mut split, mut along, mut defect) = (0.0f64, 0.0f64, 0.0f64);
    for p in &pts {
        let (b, x) = wp.split(p)?;
        let f = wp.warping_jet(&b)?.value();
        let xbf = wp.derivative_along(xi_b, &b)?;
        let gf = wp.fiber().metric_at(&x.coords)?;
        let mut expect = DMatrix::zeros(d, d);
        expect.view_mut((m, m), (d - m, d - m)).copy_from(&(gf * (2.0 * f * xbf)));
        let l = crate::curvature::lie_derivative_metric(wp.product(), &xi, p)?;
        split = split.max(max_abs((l - &expect).iter().copied()));
        along = along.max(xbf.abs());
        defect = defect.max(max_abs(expect.iter().copied()));
    }

    let mut r = report("killing-einstein", wp.product().name(), plan, params);
    r.push(Check::measured("lie-derivative-split", split, tol));
    if along <= tol {
        let mu = params.mu();
        let hyp = worst_soliton(wp.product(), &xi, mu, &pts)?;
        hypothesis(hyp, tol, || "input is not a soliton".into())?;
        let (c, res) = einstein_fit(wp.product(), plan)?;
        r.push(Check::measured("product-soliton", hyp, tol))
            .push(Check::measured("einstein", res, tol))
            .push(Check::measured("einstein-constant", (c - mu / 2.0).abs(), tol));
    } else {
        let note = format!("xi_B(f) != 0; defect 2 f xi_B(f) g_F reaches {defect:.6e}");
        r.push(Check::skipped("einstein", tol, note.clone()))
            .push(Check::skipped("einstein-constant", tol, note));
    }
    Ok(r)
}

/// Soliton on a warped product with conformal field `L_ξ g = 2ρ g`.
///
/// Product level: `Ric = (μ/2 − ρ) g`. Factor level, with
/// `L^B_{ξ_B} g_B = 2ρ_B g_B` and `L^F_{ξ_F} g_F = 2ρ_F g_F`:
/// `Ric = (μ/2) g − ρ_B g_B − f²(ρ_F + ξ_B(ln f)) g_F`, so the product is
/// Einstein with `μ/2 − ρ_B` when `ρ_B = ρ_F + ξ_B(ln f)`.
pub fn conformal_einstein_suite(
    wp: &WarpedProduct,
    xi_b: &VectorField,
    xi_f: &VectorField,
    params: &SolitonParams,
    plan: &SamplePlan,
    tol: f64,
) -> Result<SuiteReport> {
    wp.check_riemannian(plan)?;
    let mu = params.mu();
    let (m, d) = (wp.base_dim(), wp.product().dim());
    let xi = wp.split_field(xi_b, xi_f)?;
    let pts = sample_points(wp.product(), plan)?;
    let product_class = classify_field(wp.product(), &xi, plan, tol)?;
    hypothesis(product_class.conformal_residual(), tol, || {
        "product field is not conformal".into()
    })?;
    let hyp = worst_soliton(wp.product(), &xi, mu, &pts)?;
    hypothesis(hyp, tol, || "input is not a soliton".into())?;

    let mut product_einstein: f64 = 0.0;
    let mut rho_mean = 0.0;
    let (mut factor_conf, mut decomposition, mut relation, mut base_einstein) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in &pts {
        let geo = Geometry::at(wp.product(), p)?;
        let s = field_sample_from(&geo, &xi, p)?;
        let rho = s.sigma / 2.0;
        rho_mean += rho / pts.len() as f64;
        let g = geo.g();
        product_einstein = product_einstein.max(max_abs((&geo.ricci - g * (mu / 2.0 - rho)).iter().copied()));

        let (b, x) = wp.split(p)?;
        let sb = super::field_sample(wp.base(), xi_b, &b)?;
        let sf = super::field_sample(wp.fiber(), xi_f, &x)?;
        factor_conf = factor_conf.max(sb.conformal).max(sf.conformal);
        let (rho_b, rho_f) = (sb.sigma / 2.0, sf.sigma / 2.0);
        let f = wp.warping_jet(&b)?.value();
        let xb_ln_f = wp.derivative_along(xi_b, &b)? / f;
        let gb = wp.base().metric_at(&b.coords)?;
        let gf = wp.fiber().metric_at(&x.coords)?;
        let mut expect = g * (mu / 2.0);
        let mut base_block = expect.view_mut((0, 0), (m, m));
        base_block -= gb * rho_b;
        let mut fiber_block = expect.view_mut((m, m), (d - m, d - m));
        fiber_block -= gf * (f * f * (rho_f + xb_ln_f));
        decomposition = decomposition.max(max_abs((&geo.ricci - expect).iter().copied()));
        relation = relation.max((rho_b - rho_f - xb_ln_f).abs());
        base_einstein = base_einstein.max(max_abs((&geo.ricci - g * (mu / 2.0 - rho_b)).iter().copied()));
    }
    let (c, res) = einstein_fit(wp.product(), plan)?;

    let mut r = report("conformal-einstein", wp.product().name(), plan, params);
    r.push(Check::measured("conformal-product", product_class.conformal_residual(), tol))
        .push(Check::measured("product-soliton", hyp, tol))
        .push(Check::measured("einstein-conformal-factor", product_einstein, tol))
        .push(Check::measured("einstein", res, tol))
        .push(Check::measured("einstein-constant", (c - (mu / 2.0 - rho_mean)).abs(), tol));
    if factor_conf <= tol {
        r.push(Check::measured("ricci-decomposition", decomposition, tol))
            .push(Check::measured("factor-relation", relation, tol))
            .push(Check::measured("einstein-base-factor", base_einstein, tol));
    } else {
        let err = Error::HypothesisFailed {
            residual: factor_conf,
            reason: "factor fields are not both conformal".into(),
        };
        for name in ["ricci-decomposition", "factor-relation", "einstein-base-factor"] {
            r.push(Check::errored(name, tol, &err));
        }
    }
    Ok(r)
}

/// Soliton whose field is concircular, `∇_Y ξ = α Y`.
///
/// Checks `L_ξ g = 2α g` and `2α g + 2 Ric − μ g = 0`, the Einstein
/// constant both as `μ − 2α` and in the un-divided form `μ/2 − α`, and notes
/// the soliton constant `λ = α + p/2 + 1/(2n)` with its class.
pub fn concircular_suite(
    m: &ChartManifold,
    xi: &VectorField,
    params: &SolitonParams,
    plan: &SamplePlan,
    tol: f64,
) -> Result<SuiteReport> {
    let class = classify_field(m, xi, plan, tol)?;
    let concircular = class.concircular_residual();
    hypothesis(concircular, tol, || {
        format!("field classifies as {}, not concircular", class.kind.name())
    })?;
    let mu = params.mu();
    let pts = sample_points(m, plan)?;
    let hyp = worst_soliton(m, xi, mu, &pts)?;
    hypothesis(hyp, tol, || "input is not a soliton".into())?;

    let (mut lie, mut form, mut stated, mut undivided) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut alpha_mean = 0.0;
    for p in &pts {
        let geo = Geometry::at(m, p)?;
        let s = field_sample_from(&geo, xi, p)?;
        let a = s.alpha;
        alpha_mean += a / pts.len() as f64;
        let g = geo.g();
        let l = geo.lie_derivative_metric(xi, p)?;
        lie = lie.max(max_abs((l - g * (2.0 * a)).iter().copied()));
        form = form.max(max_abs((g * (2.0 * a) + &geo.ricci * 2.0 - g * mu).iter().copied()));
        stated = stated.max(max_abs((&geo.ricci - g * (mu - 2.0 * a)).iter().copied()));
        undivided = undivided.max(max_abs((&geo.ricci - g * (mu / 2.0 - a)).iter().copied()));
    }
    let lam = concircular_lambda(alpha_mean, params.pressure, params.n_conv);

    let mut r = report("concircular", m.name(), plan, params);
    r.push(Check::measured("concircular", concircular, tol))
        .push(Check::measured("product-soliton", hyp, tol))
        .push(Check::measured("lie-two-alpha", lie, tol))
        .push(Check::measured("soliton-form", form, tol))
        .push(Check::measured("einstein-mu-minus-two-alpha", stated, tol))
        .push(
            Check::measured("einstein-half-mu-minus-alpha", undivided, tol).with_note(format!(
                "lambda from alpha = {:.6e} ({:?}), p + 2 alpha + 1/n = {:.6e}, given lambda = {:.6e}",
                lam.lambda, lam.kind, lam.bracket, params.lambda
            )),
        );
    Ok(r)
}
