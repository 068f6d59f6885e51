//! Scalar expressions over chart coordinates.
//!
//! Every metric component, warping function, potential and vector-field
//! component in the engine is an [`Expr`]. Expressions are closed-form trees,
//! so [`Expr::eval_jet2`] returns value, gradient and Hessian without any
//! truncation error.

mod jet;
mod parser;

use std::fmt;

pub use jet::Jet2;
pub use parser::parse_expr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
}

impl UnaryOp {
    pub const FUNCTIONS: [UnaryOp; 8] = [
        UnaryOp::Sin,
        UnaryOp::Cos,
        UnaryOp::Sinh,
        UnaryOp::Cosh,
        UnaryOp::Tanh,
        UnaryOp::Exp,
        UnaryOp::Log,
        UnaryOp::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Sinh => "sinh",
            UnaryOp::Cosh => "cosh",
            UnaryOp::Tanh => "tanh",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<UnaryOp> {
        UnaryOp::FUNCTIONS.into_iter().find(|op| op.name() == name)
    }

    /// Value, first and second derivative of the op at `u`.
    pub(crate) fn derivatives(self, u: f64) -> Result<(f64, f64, f64)> {
        Ok(match self {
            UnaryOp::Neg => (-u, -1.0, 0.0),
            UnaryOp::Sin => {
                let (s, c) = u.sin_cos();
                (s, c, -s)
            }
            UnaryOp::Cos => {
                let (s, c) = u.sin_cos();
                (c, -s, -c)
            }
            UnaryOp::Sinh => (u.sinh(), u.cosh(), u.sinh()),
            UnaryOp::Cosh => (u.cosh(), u.sinh(), u.cosh()),
            UnaryOp::Tanh => {
                let t = u.tanh();
                let sech2 = 1.0 - t * t;
                (t, sech2, -2.0 * t * sech2)
            }
            UnaryOp::Exp => {
                let e = u.exp();
                (e, e, e)
            }
            UnaryOp::Log => {
                if !(u > 0.0) {
                    return Err(Error::domain(format!("log of non-positive value {u}")));
                }
                (u.ln(), 1.0 / u, -1.0 / (u * u))
            }
            UnaryOp::Sqrt => {
                if u < 0.0 {
                    return Err(Error::domain(format!("sqrt of negative value {u}")));
                }
                if u == 0.0 {
                    return Err(Error::domain("sqrt is not differentiable at 0"));
                }
                let s = u.sqrt();
                (s, 0.5 / s, -0.25 / (s * u))
            }
        })
    }

    pub(crate) fn apply(self, u: f64) -> Result<f64> {
        match self {
            UnaryOp::Neg => Ok(-u),
            UnaryOp::Sin => Ok(u.sin()),
            UnaryOp::Cos => Ok(u.cos()),
            UnaryOp::Sinh => Ok(u.sinh()),
            UnaryOp::Cosh => Ok(u.cosh()),
            UnaryOp::Tanh => Ok(u.tanh()),
            UnaryOp::Exp => Ok(u.exp()),
            UnaryOp::Log | UnaryOp::Sqrt => self.derivatives(u).map(|d| d.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }
}

/// Expression tree over the coordinates of a chart.
///
/// `Coord` carries both the coordinate index (used for evaluation) and its
/// name (used for printing). The exponent of `Pow` is always a `Constant`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    Coord { index: usize, name: String },
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Constant(value)
    }

    pub fn coord(index: usize, name: impl Into<String>) -> Expr {
        Expr::Coord {
            index,
            name: name.into(),
        }
    }

    pub fn unary(op: UnaryOp, child: Expr) -> Expr {
        Expr::Unary(op, Box::new(child))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinaryOp::Add, Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinaryOp::Sub, Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinaryOp::Mul, Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinaryOp::Div, Box::new(a), Box::new(b))
    }

    pub fn pow(base: Expr, exponent: f64) -> Expr {
        Expr::Binary(
            BinaryOp::Pow,
            Box::new(base),
            Box::new(Expr::Constant(exponent)),
        )
    }

    pub fn ln(self) -> Expr {
        Expr::unary(UnaryOp::Log, self)
    }

    pub fn is_zero_constant(&self) -> bool {
        matches!(self, Expr::Constant(c) if *c == 0.0)
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            Expr::Constant(_) => None,
            Expr::Coord { index, .. } => Some(*index),
            Expr::Unary(_, c) => c.max_coord(),
            Expr::Binary(_, a, b) => match (a.max_coord(), b.max_coord()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    pub fn depends_on(&self, index: usize) -> bool {
        match self {
            Expr::Constant(_) => false,
            Expr::Coord { index: i, .. } => *i == index,
            Expr::Unary(_, c) => c.depends_on(index),
            Expr::Binary(_, a, b) => a.depends_on(index) || b.depends_on(index),
        }
    }

    /// Shifts every coordinate index by `offset` (used when embedding a
    /// factor chart into a product chart).
    pub fn shifted(&self, offset: usize) -> Expr {
        self.map_coords(&|index, name| Expr::coord(index + offset, name))
    }

    /// Replaces coordinates with constants where `values[index]` is `Some`.
    pub fn substitute(&self, values: &[Option<f64>]) -> Expr {
        self.map_coords(&|index, name| match values.get(index).copied().flatten() {
            Some(v) => Expr::Constant(v),
            None => Expr::coord(index, name),
        })
    }

    /// Rebuilds the tree, replacing each `Coord` leaf with `f(index, name)`.
    pub fn map_coords(&self, f: &dyn Fn(usize, &str) -> Expr) -> Expr {
        match self {
            Expr::Constant(c) => Expr::Constant(*c),
            Expr::Coord { index, name } => f(*index, name),
            Expr::Unary(op, c) => Expr::unary(*op, c.map_coords(f)),
            Expr::Binary(op, a, b) => {
                Expr::Binary(*op, Box::new(a.map_coords(f)), Box::new(b.map_coords(f)))
            }
        }
    }

    /// Plain value evaluation (no derivatives).
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        match self {
            Expr::Constant(c) => Ok(*c),
            Expr::Coord { index, name } => point.get(*index).copied().ok_or_else(|| {
                Error::domain(format!("coordinate `{name}` (index {index}) outside point"))
            }),
            Expr::Unary(op, c) => op.apply(c.eval(point)?),
            Expr::Binary(op, a, b) => {
                let x = a.eval(point)?;
                match op {
                    BinaryOp::Add => Ok(x + b.eval(point)?),
                    BinaryOp::Sub => Ok(x - b.eval(point)?),
                    BinaryOp::Mul => Ok(x * b.eval(point)?),
                    BinaryOp::Div => {
                        let y = b.eval(point)?;
                        if y == 0.0 {
                            return Err(Error::domain("division by zero"));
                        }
                        Ok(x / y)
                    }
                    BinaryOp::Pow => {
                        let k = constant_exponent(b)?;
                        jet::pow_derivatives(x, k).map(|d| d.0)
                    }
                }
            }
        }
    }

    /// Value, gradient and Hessian at `point` by forward jet arithmetic.
    pub fn eval_jet2(&self, point: &[f64]) -> Result<Jet2> {
        let dim = point.len();
        match self {
            Expr::Constant(c) => Ok(Jet2::constant(*c, dim)),
            Expr::Coord { index, name } => {
                if *index >= dim {
                    return Err(Error::domain(format!(
                        "coordinate `{name}` (index {index}) outside point of dimension {dim}"
                    )));
                }
                Ok(Jet2::variable(point[*index], *index, dim))
            }
            Expr::Unary(op, c) => {
                let inner = c.eval_jet2(point)?;
                let (v, d1, d2) = op.derivatives(inner.value())?;
                Ok(inner.chain(v, d1, d2))
            }
            Expr::Binary(op, a, b) => {
                let x = a.eval_jet2(point)?;
                match op {
                    BinaryOp::Add => Ok(x.add(&b.eval_jet2(point)?)),
                    BinaryOp::Sub => Ok(x.sub(&b.eval_jet2(point)?)),
                    BinaryOp::Mul => Ok(x.mul(&b.eval_jet2(point)?)),
                    BinaryOp::Div => x.div(&b.eval_jet2(point)?),
                    BinaryOp::Pow => {
                        let k = constant_exponent(b)?;
                        let (v, d1, d2) = jet::pow_derivatives(x.value(), k)?;
                        Ok(x.chain(v, d1, d2))
                    }
                }
            }
        }
    }
}

fn constant_exponent(e: &Expr) -> Result<f64> {
    match e {
        Expr::Constant(k) => Ok(*k),
        _ => Err(Error::Unsupported(
            "pow exponent must be a constant".to_string(),
        )),
    }
}

fn fmt_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v.is_sign_negative() {
        write!(f, "(-{:?})", -v)
    } else {
        write!(f, "{v:?}")
    }
}

/// Fully parenthesized printing that re-parses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) => fmt_number(f, *c),
            Expr::Coord { name, .. } => f.write_str(name),
            Expr::Unary(UnaryOp::Neg, c) if matches!(**c, Expr::Constant(_)) => write!(f, "(-({c}))"),
            Expr::Unary(UnaryOp::Neg, c) => write!(f, "(-{c})"),
            Expr::Unary(op, c) => write!(f, "{}({c})", op.name()),
            Expr::Binary(BinaryOp::Pow, a, b) => {
                let k = match **b {
                    Expr::Constant(k) => k,
                    _ => return Err(fmt::Error),
                };
                if k.is_sign_negative() {
                    write!(f, "({a})^-{:?}", -k)
                } else {
                    write!(f, "({a})^{k:?}")
                }
            }
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_and_substitute() {
        let e = parse_expr("x*y + sin(y)", &["x", "y"]).unwrap();
        let s = e.shifted(2);
        assert_eq!(s.max_coord(), Some(3));
        assert_eq!(s.eval(&[0.0, 0.0, 2.0, 3.0]).unwrap(), e.eval(&[2.0, 3.0]).unwrap());
        let frozen = e.substitute(&[None, Some(0.5)]);
        assert!(!frozen.depends_on(1));
        assert_eq!(frozen.eval(&[4.0]).unwrap(), e.eval(&[4.0, 0.5]).unwrap());
    }

    #[test]
    fn negative_constants_print_and_reparse() {
        let e = Expr::mul(Expr::Constant(-2.5), Expr::pow(Expr::coord(0, "t"), -1.0));
        let back = parse_expr(&e.to_string(), &["t"]).unwrap();
        assert_eq!(back.eval(&[3.0]).unwrap(), e.eval(&[3.0]).unwrap());
    }

    #[test]
    fn plain_eval_domain_errors() {
        let c = ["x"];
        for text in ["log(x)", "sqrt(x - 1)", "1/x", "x^-1"] {
            let e = parse_expr(text, &c).unwrap();
            assert!(matches!(e.eval(&[0.0]), Err(Error::Domain(_))), "{text}");
        }
    }
}
