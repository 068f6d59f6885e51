use crate::error::{Error, Result};

/// Second-order jet of a scalar: value, gradient and Hessian at a point.
///
/// The Hessian keeps only its upper triangle (row-major packed), so it is
/// symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
}

#[inline]
fn packed_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * dim - i * (i + 1) / 2 + j
}

impl Jet2 {
    pub fn constant(value: f64, dim: usize) -> Jet2 {
        Jet2 {
            value,
            grad: vec![0.0; dim],
            hess: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn variable(value: f64, index: usize, dim: usize) -> Jet2 {
        let mut j = Jet2::constant(value, dim);
        j.grad[index] = 1.0;
        j
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[packed_index(self.dim(), i, j)]
    }

    /// Full symmetric Hessian as row-major rows.
    pub fn hess_matrix(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.hess(i, j)).collect())
            .collect()
    }

    fn upper_pairs(dim: usize) -> impl Iterator<Item = (usize, usize)> {
        (0..dim).flat_map(move |i| (i..dim).map(move |j| (i, j)))
    }

    pub fn scale(&self, a: f64) -> Jet2 {
        Jet2 {
            value: a * self.value,
            grad: self.grad.iter().map(|g| a * g).collect(),
            hess: self.hess.iter().map(|h| a * h).collect(),
        }
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value + other.value,
            grad: zip_with(&self.grad, &other.grad, |a, b| a + b),
            hess: zip_with(&self.hess, &other.hess, |a, b| a + b),
        }
    }

    pub fn sub(&self, other: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value - other.value,
            grad: zip_with(&self.grad, &other.grad, |a, b| a - b),
            hess: zip_with(&self.hess, &other.hess, |a, b| a - b),
        }
    }

    pub fn mul(&self, other: &Jet2) -> Jet2 {
        let (a, b) = (self.value, other.value);
        let (ga, gb) = (&self.grad, &other.grad);
        let grad = zip_with(ga, gb, |x, y| a * y + b * x);
        let hess = Jet2::upper_pairs(self.dim())
            .zip(self.hess.iter().zip(&other.hess))
            .map(|((i, j), (ha, hb))| a * hb + b * ha + ga[i] * gb[j] + gb[i] * ga[j])
            .collect();
        Jet2 {
            value: a * b,
            grad,
            hess,
        }
    }

    pub fn div(&self, other: &Jet2) -> Result<Jet2> {
        let u = other.value;
        if u == 0.0 {
            return Err(Error::domain("division by zero"));
        }
        let recip = other.chain(1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u));
        Ok(self.mul(&recip))
    }

    /// Composes an outer scalar function with this jet, given the outer
    /// function's value and first two derivatives at `self.value()`.
    pub fn chain(&self, value: f64, d1: f64, d2: f64) -> Jet2 {
        let g = &self.grad;
        let grad = g.iter().map(|x| d1 * x).collect();
        let hess = Jet2::upper_pairs(self.dim())
            .zip(&self.hess)
            .map(|((i, j), h)| d2 * g[i] * g[j] + d1 * h)
            .collect();
        Jet2 { value, grad, hess }
    }
}

fn zip_with(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()
}

fn is_nonneg_integer(k: f64) -> bool {
    k >= 0.0 && k.fract() == 0.0
}

/// `u^k` and its first two derivatives in `u`, for a constant exponent.
pub(crate) fn pow_derivatives(u: f64, k: f64) -> Result<(f64, f64, f64)> {
    if k == 0.0 {
        return Ok((1.0, 0.0, 0.0));
    }
    let integral = k.fract() == 0.0 && k.abs() < i32::MAX as f64;
    if u < 0.0 && !integral {
        return Err(Error::domain(format!(
            "negative base {u} with non-integer exponent {k}"
        )));
    }
    if u == 0.0 {
        if k < 0.0 {
            return Err(Error::domain(format!("0 raised to negative power {k}")));
        }
        if !is_nonneg_integer(k) && k < 2.0 {
            return Err(Error::domain(format!(
                "u^{k} is not twice differentiable at 0"
            )));
        }
    }
    let p = |e: f64| {
        if integral {
            u.powi(e as i32)
        } else {
            u.powf(e)
        }
    };
    let value = p(k);
    let d1 = k * p(k - 1.0);
    let d2 = if k == 1.0 { 0.0 } else { k * (k - 1.0) * p(k - 2.0) };
    Ok((value, d1, d2))
}
