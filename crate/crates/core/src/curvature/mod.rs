//! Levi-Civita connection and curvature from exact metric jets.
//!
//! Index conventions:
//! - `Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})`
//! - `R^l_{ijk} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik}`,
//!   so that `R(∂_i, ∂_j)∂_k = R^l_{ijk} ∂_l`
//! - `Ric_{jk} = R^i_{ijk}`, `r = g^{jk} Ric_{jk}`

mod fd;

use nalgebra::DMatrix;

pub use fd::{fd_cross_check, fd_deviation, FdGeometry, FD_CHRISTOFFEL_BUDGET, FD_CURVATURE_BUDGET};

use crate::error::{Error, Result};
use crate::manifold::{ChartManifold, Point, ScalarField, VectorField};

/// Determinant threshold below which a metric counts as degenerate.
pub const SINGULAR_DET: f64 = 1e-12;

/// Metric, inverse and first/second partials at a point.
#[derive(Debug, Clone)]
pub struct MetricJet {
    dim: usize,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    dg: Vec<f64>,
    ddg: Vec<f64>,
    dinv: Vec<f64>,
}

impl MetricJet {
    pub fn at(m: &ChartManifold, pt: &Point) -> Result<MetricJet> {
        m.check_point(pt)?;
        let d = m.dim();
        let mut g = DMatrix::zeros(d, d);
        let mut dg = vec![0.0; d * d * d];
        let mut ddg = vec![0.0; d * d * d * d];
        for i in 0..d {
            for j in i..d {
                let jet = m.metric_expr(i, j).eval_jet2(&pt.coords)?;
                g[(i, j)] = jet.value();
                g[(j, i)] = jet.value();
                for k in 0..d {
                    let v = jet.grad()[k];
                    dg[(k * d + i) * d + j] = v;
                    dg[(k * d + j) * d + i] = v;
                    for l in 0..d {
                        let h = jet.hess(k, l);
                        ddg[((k * d + l) * d + i) * d + j] = h;
                        ddg[((k * d + l) * d + j) * d + i] = h;
                    }
                }
            }
        }
        let lu = g.clone().lu();
        let det = lu.determinant();
        if !(det.abs() > SINGULAR_DET) {
            return Err(Error::SingularMetric { det });
        }
        let inv = lu.try_inverse().ok_or(Error::SingularMetric { det })?;
        let g_inv = (&inv + inv.transpose()) * 0.5;

        // ∂_k g^{ij} = −g^{ia} ∂_k g_{ab} g^{bj}
        let mut dinv = vec![0.0; d * d * d];
        for k in 0..d {
            let dk = DMatrix::from_fn(d, d, |a, b| dg[(k * d + a) * d + b]);
            let prod = -(&g_inv * dk * &g_inv);
            for i in 0..d {
                for j in 0..d {
                    dinv[(k * d + i) * d + j] = 0.5 * (prod[(i, j)] + prod[(j, i)]);
                }
            }
        }
        Ok(MetricJet {
            dim: d,
            g,
            g_inv,
            dg,
            ddg,
            dinv,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∂_k g_{ij}`
    pub fn dg(&self, k: usize, i: usize, j: usize) -> f64 {
        let d = self.dim;
        self.dg[(k * d + i) * d + j]
    }

    /// `∂_k ∂_l g_{ij}`
    pub fn ddg(&self, k: usize, l: usize, i: usize, j: usize) -> f64 {
        let d = self.dim;
        self.ddg[((k * d + l) * d + i) * d + j]
    }

    /// `∂_k g^{ij}`
    pub fn d_inv(&self, k: usize, i: usize, j: usize) -> f64 {
        let d = self.dim;
        self.dinv[(k * d + i) * d + j]
    }
}

/// `Γ^k_{ij}`, symmetric in `(i, j)` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dim: usize,
    gamma: Vec<f64>,
}

impl Christoffel {
    pub fn from_jet(jet: &MetricJet) -> Christoffel {
        let d = jet.dim;
        let mut gamma = vec![0.0; d * d * d];
        for k in 0..d {
            for i in 0..d {
                for j in i..d {
                    let s: f64 = (0..d)
                        .map(|l| {
                            jet.g_inv[(k, l)] * (jet.dg(i, j, l) + jet.dg(j, i, l) - jet.dg(l, i, j))
                        })
                        .sum();
                    gamma[(k * d + i) * d + j] = 0.5 * s;
                    gamma[(k * d + j) * d + i] = 0.5 * s;
                }
            }
        }
        Christoffel { dim: d, gamma }
    }

    pub(crate) fn from_raw(dim: usize, gamma: Vec<f64>) -> Christoffel {
        Christoffel { dim, gamma }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        let d = self.dim;
        self.gamma[(k * d + i) * d + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.gamma
    }
}

/// `R^l_{ijk}` stored densely as `[l][i][j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Riemann {
    dim: usize,
    data: Vec<f64>,
}

impl Riemann {
    /// Assembles the tensor from Γ and its partials `dgamma(m, k, i, j) = ∂_m Γ^k_{ij}`.
    pub(crate) fn assemble(gamma: &Christoffel, dgamma: impl Fn(usize, usize, usize, usize) -> f64) -> Riemann {
        let d = gamma.dim;
        let mut data = vec![0.0; d * d * d * d];
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let mut r = dgamma(i, l, j, k) - dgamma(j, l, i, k);
                        for m in 0..d {
                            r += gamma.get(l, i, m) * gamma.get(m, j, k)
                                - gamma.get(l, j, m) * gamma.get(m, i, k);
                        }
                        data[((l * d + i) * d + j) * d + k] = r;
                    }
                }
            }
        }
        Riemann { dim: d, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim;
        self.data[((l * d + i) * d + j) * d + k]
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    /// `Ric_{jk} = R^i_{ijk}`
    pub fn ricci(&self) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |j, k| (0..d).map(|i| self.get(i, i, j, k)).sum())
    }

    /// Largest first-Bianchi defect `|R^l_{ijk} + R^l_{jki} + R^l_{kij}|`.
    pub fn bianchi_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let s = self.get(l, i, j, k) + self.get(l, j, k, i) + self.get(l, k, i, j);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Every curvature quantity at one point of a chart.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub jet: MetricJet,
    pub christoffel: Christoffel,
    pub riemann: Riemann,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
}

impl Geometry {
    pub fn at(m: &ChartManifold, pt: &Point) -> Result<Geometry> {
        let jet = MetricJet::at(m, pt)?;
        let christoffel = Christoffel::from_jet(&jet);
        let d = jet.dim;
        // ∂_m Γ^k_{ij} = ½ ∂_m g^{kl} S_{ijl} + ½ g^{kl} ∂_m S_{ijl},
        // S_{ijl} = ∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij}
        let mut dgamma = vec![0.0; d * d * d * d];
        for m_ in 0..d {
            for k in 0..d {
                for i in 0..d {
                    for j in i..d {
                        let mut s = 0.0;
                        for l in 0..d {
                            let sym = jet.dg(i, j, l) + jet.dg(j, i, l) - jet.dg(l, i, j);
                            let dsym = jet.ddg(m_, i, j, l) + jet.ddg(m_, j, i, l) - jet.ddg(m_, l, i, j);
                            s += jet.d_inv(m_, k, l) * sym + jet.g_inv[(k, l)] * dsym;
                        }
                        dgamma[((m_ * d + k) * d + i) * d + j] = 0.5 * s;
                        dgamma[((m_ * d + k) * d + j) * d + i] = 0.5 * s;
                    }
                }
            }
        }
        let riemann = Riemann::assemble(&christoffel, |m_, k, i, j| {
            dgamma[((m_ * d + k) * d + i) * d + j]
        });
        let raw = riemann.ricci();
        let ricci = (&raw + raw.transpose()) * 0.5;
        let scalar = jet.g_inv.component_mul(&ricci).sum();
        Ok(Geometry {
            jet,
            christoffel,
            riemann,
            ricci,
            scalar,
        })
    }

    pub fn dim(&self) -> usize {
        self.jet.dim
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.jet.g
    }

    /// `g(R(e_i, e_j)e_j, e_i) / (g_ii g_jj − g_ij²)`
    pub fn sectional_curvature(&self, i: usize, j: usize) -> f64 {
        let g = &self.jet.g;
        let d = self.dim();
        let num: f64 = (0..d).map(|l| g[(i, l)] * self.riemann.get(l, i, j, j)).sum();
        num / (g[(i, i)] * g[(j, j)] - g[(i, j)] * g[(i, j)])
    }

    /// Largest `|∂_k g_{ij} − Γ^l_{ki} g_{lj} − Γ^l_{kj} g_{il}|`.
    pub fn metric_compatibility_defect(&self) -> f64 {
        let d = self.dim();
        let g = &self.jet.g;
        let mut worst: f64 = 0.0;
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let mut v = self.jet.dg(k, i, j);
                    for l in 0..d {
                        v -= self.christoffel.get(l, k, i) * g[(l, j)]
                            + self.christoffel.get(l, k, j) * g[(i, l)];
                    }
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }

    /// Covariant Hessian `∂_i∂_j φ − Γ^k_{ij} ∂_k φ`.
    pub fn hessian(&self, phi: &ScalarField, pt: &Point) -> Result<DMatrix<f64>> {
        hessian_from(&self.christoffel, phi, pt)
    }

    /// `(Δφ, ‖∇φ‖²)`
    pub fn laplacian_gradnorm(&self, phi: &ScalarField, pt: &Point) -> Result<(f64, f64)> {
        laplacian_gradnorm_from(&self.jet, &self.christoffel, phi, pt)
    }

    /// `(L_X g)_{ij} = X^k ∂_k g_{ij} + g_{kj} ∂_i X^k + g_{ik} ∂_j X^k`
    pub fn lie_derivative_metric(&self, x: &VectorField, pt: &Point) -> Result<DMatrix<f64>> {
        let v = x.eval(pt, &self.jet)?;
        Ok(lie_from_jet(&self.jet, &v.value, &v.jacobian))
    }

    /// `(∇_X ξ)^k = X^i ∂_i ξ^k + Γ^k_{ij} X^i ξ^j`
    pub fn covariant_derivative(
        &self,
        dir: &[f64],
        xi: &VectorField,
        pt: &Point,
    ) -> Result<Vec<f64>> {
        let v = xi.eval(pt, &self.jet)?;
        Ok(self.covariant_from_jet(dir, &v.value, &v.jacobian))
    }

    pub(crate) fn covariant_from_jet(
        &self,
        dir: &[f64],
        value: &[f64],
        jacobian: &DMatrix<f64>,
    ) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..d {
                    s += dir[i] * jacobian[(k, i)];
                    for j in 0..d {
                        s += self.christoffel.get(k, i, j) * dir[i] * value[j];
                    }
                }
                s
            })
            .collect()
    }
}

pub(crate) fn lie_from_jet(jet: &MetricJet, x: &[f64], dx: &DMatrix<f64>) -> DMatrix<f64> {
    let d = jet.dim;
    let g = &jet.g;
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut s = 0.0;
            for k in 0..d {
                s += x[k] * jet.dg(k, i, j) + g[(k, j)] * dx[(k, i)] + g[(i, k)] * dx[(k, j)];
            }
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    out
}

pub fn metric_jet(m: &ChartManifold, pt: &Point) -> Result<MetricJet> {
    MetricJet::at(m, pt)
}

pub fn christoffel(m: &ChartManifold, pt: &Point) -> Result<Christoffel> {
    MetricJet::at(m, pt).map(|j| Christoffel::from_jet(&j))
}

pub fn riemann(m: &ChartManifold, pt: &Point) -> Result<Riemann> {
    Geometry::at(m, pt).map(|g| g.riemann)
}

pub fn ricci(m: &ChartManifold, pt: &Point) -> Result<DMatrix<f64>> {
    Geometry::at(m, pt).map(|g| g.ricci)
}

pub fn scalar_curvature(m: &ChartManifold, pt: &Point) -> Result<f64> {
    Geometry::at(m, pt).map(|g| g.scalar)
}

fn hessian_from(christoffel: &Christoffel, phi: &ScalarField, pt: &Point) -> Result<DMatrix<f64>> {
    let j = phi.expr.eval_jet2(&pt.coords)?;
    let d = christoffel.dim;
    let mut h = DMatrix::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            let corr: f64 = (0..d).map(|k| christoffel.get(k, a, b) * j.grad()[k]).sum();
            let v = j.hess(a, b) - corr;
            h[(a, b)] = v;
            h[(b, a)] = v;
        }
    }
    Ok(h)
}

fn laplacian_gradnorm_from(
    jet: &MetricJet,
    christoffel: &Christoffel,
    phi: &ScalarField,
    pt: &Point,
) -> Result<(f64, f64)> {
    let h = hessian_from(christoffel, phi, pt)?;
    let j = phi.expr.eval_jet2(&pt.coords)?;
    let d = jet.dim;
    let lap = jet.g_inv.component_mul(&h).sum();
    let mut norm = 0.0;
    for a in 0..d {
        for b in 0..d {
            norm += jet.g_inv[(a, b)] * j.grad()[a] * j.grad()[b];
        }
    }
    Ok((lap, norm))
}

pub fn hessian(m: &ChartManifold, phi: &ScalarField, pt: &Point) -> Result<DMatrix<f64>> {
    hessian_from(&christoffel(m, pt)?, phi, pt)
}

pub fn laplacian_gradnorm(m: &ChartManifold, phi: &ScalarField, pt: &Point) -> Result<(f64, f64)> {
    let jet = MetricJet::at(m, pt)?;
    let ch = Christoffel::from_jet(&jet);
    laplacian_gradnorm_from(&jet, &ch, phi, pt)
}

pub fn lie_derivative_metric(m: &ChartManifold, x: &VectorField, pt: &Point) -> Result<DMatrix<f64>> {
    let jet = MetricJet::at(m, pt)?;
    let v = x.eval(pt, &jet)?;
    Ok(lie_from_jet(&jet, &v.value, &v.jacobian))
}

pub fn covariant_derivative_vector(
    m: &ChartManifold,
    dir: &VectorField,
    xi: &VectorField,
    pt: &Point,
) -> Result<Vec<f64>> {
    let jet = MetricJet::at(m, pt)?;
    let christoffel = Christoffel::from_jet(&jet);
    let x = dir.eval(pt, &jet)?;
    let v = xi.eval(pt, &jet)?;
    let d = jet.dim;
    Ok((0..d)
        .map(|k| {
            let mut s = 0.0;
            for i in 0..d {
                s += x.value[i] * v.jacobian[(k, i)];
                for j in 0..d {
                    s += christoffel.get(k, i, j) * x.value[i] * v.value[j];
                }
            }
            s
        })
        .collect())
}
