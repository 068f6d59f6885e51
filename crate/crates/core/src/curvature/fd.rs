//! Finite-difference oracle: Γ, Riemann and Ricci from metric *values* only.
//!
//! Γ comes from central differences of g; ∂Γ from central differences of
//! that finite-difference Γ. No jets are used anywhere in this file.

use nalgebra::DMatrix;

use super::{Christoffel, Geometry, Riemann};
use crate::error::{Error, Result};
use crate::manifold::{ChartManifold, Point};
use crate::report::{max_abs, Check, Provenance, SuiteReport};

/// Deviation budget for Christoffel symbols at `h = 1e-4`.
pub const FD_CHRISTOFFEL_BUDGET: f64 = 1e-5;
/// Deviation budget for Riemann and Ricci at `h = 1e-4`.
pub const FD_CURVATURE_BUDGET: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct FdGeometry {
    pub christoffel: Christoffel,
    pub riemann: Riemann,
    pub ricci: DMatrix<f64>,
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for (i, dx) in moves {
        y[*i] += dx;
    }
    y
}

fn fd_gamma(m: &ChartManifold, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let d = m.dim();
    let g = m.metric_at(x)?;
    let inv = g
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMetric { det: g.determinant() })?;
    // dg[k][i][j] ≈ ∂_k g_ij
    let mut dg = vec![DMatrix::<f64>::zeros(d, d); d];
    for (k, slot) in dg.iter_mut().enumerate() {
        let plus = m.metric_at(&shifted(x, &[(k, h)]))?;
        let minus = m.metric_at(&shifted(x, &[(k, -h)]))?;
        *slot = (plus - minus) / (2.0 * h);
    }
    let mut gamma = vec![0.0; d * d * d];
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for l in 0..d {
                    s += inv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                gamma[(k * d + i) * d + j] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

impl FdGeometry {
    /// Requires `pt` to be more than `2h` from the domain boundary.
    pub fn at(m: &ChartManifold, pt: &Point, h: f64) -> Result<FdGeometry> {
        m.check_point(pt)?;
        if !(h > 0.0) {
            return Err(Error::domain(format!("finite-difference step must be positive, got {h}")));
        }
        for (iv, x) in m.domain().iter().zip(&pt.coords) {
            if !(x - 2.0 * h > iv.lo && x + 2.0 * h < iv.hi) {
                return Err(Error::domain(format!(
                    "point {x} within 2h of the domain boundary ({}, {})",
                    iv.lo, iv.hi
                )));
            }
        }
        let d = m.dim();
        let x = &pt.coords;
        let gamma = fd_gamma(m, x, h)?;
        let mut dgamma = vec![0.0; d * d * d * d];
        for mm in 0..d {
            let plus = fd_gamma(m, &shifted(x, &[(mm, h)]), h)?;
            let minus = fd_gamma(m, &shifted(x, &[(mm, -h)]), h)?;
            for (n, (p, q)) in plus.iter().zip(&minus).enumerate() {
                dgamma[mm * d * d * d + n] = (p - q) / (2.0 * h);
            }
        }
        let christoffel = Christoffel::from_raw(d, gamma);
        let riemann = Riemann::assemble(&christoffel, |mm, k, i, j| {
            dgamma[((mm * d + k) * d + i) * d + j]
        });
        let ricci = riemann.ricci();
        Ok(FdGeometry {
            christoffel,
            riemann,
            ricci,
        })
    }
}

/// Max absolute deviations `(Γ, Riemann, Ricci)` between the jet pipeline
/// and the finite-difference oracle at one point.
pub fn fd_deviation(m: &ChartManifold, pt: &Point, h: f64) -> Result<(f64, f64, f64)> {
    let ad = Geometry::at(m, pt)?;
    let fd = FdGeometry::at(m, pt, h)?;
    let diff = |a: &[f64], b: &[f64]| max_abs(a.iter().zip(b).map(|(x, y)| x - y));
    Ok((
        diff(ad.christoffel.values(), fd.christoffel.values()),
        diff(ad.riemann.values(), fd.riemann.values()),
        max_abs((&ad.ricci - &fd.ricci).iter().copied()),
    ))
}

/// Compares the jet pipeline against the oracle at one point.
pub fn fd_cross_check(m: &ChartManifold, pt: &Point, h: f64) -> Result<SuiteReport> {
    let (dg, dr, dric) = fd_deviation(m, pt, h)?;
    let mut report = SuiteReport::new(
        format!("fd-check:{}", m.name()),
        Provenance {
            seed: 0,
            count: 1,
            n_conv: None,
        },
    );
    report
        .push(Check::measured("christoffel-deviation", dg, FD_CHRISTOFFEL_BUDGET))
        .push(Check::measured("riemann-deviation", dr, FD_CURVATURE_BUDGET))
        .push(Check::measured("ricci-deviation", dric, FD_CURVATURE_BUDGET));
    Ok(report)
}
