use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpsol::expr::{BinaryOp, UnaryOp};
use warpsol::{parse_expr, Error, Expr};

const COORDS: [&str; 3] = ["x", "y", "z"];

/// Central-difference oracle for gradient and Hessian of a plain evaluator.
fn fd_jet(e: &Expr, p: &[f64], h: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = p.len();
    let f = |q: &[f64]| e.eval(q).unwrap();
    let at = |moves: &[(usize, f64)]| {
        let mut q = p.to_vec();
        for (i, dx) in moves {
            q[*i] += dx;
        }
        f(&q)
    };
    let grad = (0..d).map(|i| (at(&[(i, h)]) - at(&[(i, -h)])) / (2.0 * h)).collect();
    let hess = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        (at(&[(i, h)]) - 2.0 * f(p) + at(&[(i, -h)])) / (h * h)
                    } else {
                        (at(&[(i, h), (j, h)]) - at(&[(i, h), (j, -h)]) - at(&[(i, -h), (j, h)])
                            + at(&[(i, -h), (j, -h)]))
                            / (4.0 * h * h)
                    }
                })
                .collect()
        })
        .collect();
    (grad, hess)
}

#[test]
fn polynomial_jet() {
    let e = parse_expr("t^2", &["t"]).unwrap();
    let j = e.eval_jet2(&[3.0]).unwrap();
    assert_eq!((j.value(), j.grad().to_vec(), j.hess_matrix()), (9.0, vec![6.0], vec![vec![2.0]]));
}

#[test]
fn product_rule_jet() {
    let e = parse_expr("sin(x)*y", &["x", "y"]).unwrap();
    let j = e.eval_jet2(&[0.0, 2.0]).unwrap();
    assert_eq!(j.value(), 0.0);
    assert_eq!(j.grad(), &[2.0, 0.0]);
    assert_eq!(j.hess_matrix(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
}

#[test]
fn exp_jet_matches_finite_differences() {
    let e = parse_expr("exp(t)", &["t"]).unwrap();
    let j = e.eval_jet2(&[1.0]).unwrap();
    let (g, h) = fd_jet(&e, &[1.0], 1e-4);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    assert!(rel(g[0], j.grad()[0]) <= 1e-6);
    assert!(rel(h[0][0], j.hess(0, 0)) <= 1e-6);
    let ee = std::f64::consts::E;
    assert_eq!(j.value(), ee);
    assert_eq!(j.grad()[0], ee);
    assert_eq!(j.hess(0, 0), ee);
}

#[test]
fn constant_jet_is_flat() {
    let j = parse_expr("3.5", &COORDS).unwrap().eval_jet2(&[1.0, 2.0, 3.0]).unwrap();
    assert!(j.grad().iter().all(|g| *g == 0.0));
    assert!(j.hess_matrix().iter().flatten().all(|h| *h == 0.0));
}

#[test]
fn domain_errors() {
    let c = ["x"];
    let cases = ["log(x)", "log(-x - 1)", "1/x", "sqrt(x - 1)", "x^-2", "sqrt(x)"];
    for text in cases {
        let e = parse_expr(text, &c).unwrap();
        assert!(matches!(e.eval_jet2(&[0.0]), Err(Error::Domain(_))), "{text}");
    }
}

/// Smooth random expressions: guarded so every sample point is well inside
/// the domain of each operation.
fn smooth_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-3.0f64..3.0).prop_map(Expr::Constant),
        (0usize..3).prop_map(|i| Expr::coord(i, COORDS[i])),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            // a / (2 + b²) never divides by zero
            (inner.clone(), inner.clone()).prop_map(|(a, b)| {
                Expr::div(a, Expr::add(Expr::Constant(2.0), Expr::pow(b, 2.0)))
            }),
            (inner.clone(), 0u8..4).prop_map(|(a, k)| Expr::pow(a, f64::from(k))),
            inner.clone().prop_map(|a| Expr::unary(UnaryOp::Neg, a)),
            inner.clone().prop_map(|a| Expr::unary(UnaryOp::Sin, a)),
            inner.clone().prop_map(|a| Expr::unary(UnaryOp::Cos, a)),
            inner.clone().prop_map(|a| Expr::unary(UnaryOp::Tanh, a)),
            // exp/sinh/cosh of a bounded argument
            inner.clone().prop_map(|a| Expr::unary(UnaryOp::Exp, Expr::unary(UnaryOp::Sin, a))),
            inner.clone().prop_map(|a| Expr::unary(UnaryOp::Sinh, Expr::unary(UnaryOp::Cos, a))),
            inner.clone().prop_map(|a| Expr::unary(UnaryOp::Cosh, Expr::unary(UnaryOp::Tanh, a))),
            // log and sqrt of something ≥ 1
            inner.clone().prop_map(|a| Expr::unary(
                UnaryOp::Log,
                Expr::add(Expr::Constant(1.0), Expr::pow(a, 2.0))
            )),
            inner.prop_map(|a| Expr::unary(
                UnaryOp::Sqrt,
                Expr::add(Expr::Constant(1.0), Expr::pow(a, 2.0))
            )),
        ]
    })
}

fn seeded_points(seed: u64, n: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..3).map(|_| rng.random_range(-1.5..1.5)).collect())
        .collect()
}

fn contains_deep_pow(e: &Expr) -> bool {
    match e {
        Expr::Binary(BinaryOp::Pow, _, _) => true,
        Expr::Binary(_, a, b) => contains_deep_pow(a) || contains_deep_pow(b),
        Expr::Unary(_, a) => contains_deep_pow(a),
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn print_parse_round_trip_bitwise(e in smooth_expr(), seed in any::<u64>()) {
        let printed = e.to_string();
        let back = parse_expr(&printed, &COORDS).unwrap();
        for p in seeded_points(seed, 64) {
            let a = e.eval_jet2(&p).unwrap();
            let b = back.eval_jet2(&p).unwrap();
            prop_assert_eq!(a.value().to_bits(), b.value().to_bits());
            for i in 0..3 {
                prop_assert_eq!(a.grad()[i].to_bits(), b.grad()[i].to_bits());
                for j in 0..3 {
                    prop_assert_eq!(a.hess(i, j).to_bits(), b.hess(i, j).to_bits());
                }
            }
        }
    }

    #[test]
    fn jet_is_linear(e1 in smooth_expr(), e2 in smooth_expr(), a in -4.0f64..4.0, seed in any::<u64>()) {
        let combo = Expr::add(Expr::mul(Expr::Constant(a), e1.clone()), e2.clone());
        for p in seeded_points(seed, 16) {
            let lhs = combo.eval_jet2(&p).unwrap();
            let rhs = e1.eval_jet2(&p).unwrap().scale(a).add(&e2.eval_jet2(&p).unwrap());
            let close = |x: f64, y: f64| (x - y).abs() <= 1e-13 * (1.0 + x.abs().max(y.abs()));
            prop_assert!(close(lhs.value(), rhs.value()));
            for i in 0..3 {
                prop_assert!(close(lhs.grad()[i], rhs.grad()[i]));
                for j in 0..3 {
                    prop_assert!(close(lhs.hess(i, j), rhs.hess(i, j)));
                }
            }
        }
    }

    #[test]
    fn jet_matches_finite_differences(e in smooth_expr(), seed in any::<u64>()) {
        // deep power towers amplify FD roundoff beyond the stated budget
        prop_assume!(!contains_deep_pow(&e) || e.to_string().len() < 120);
        for p in seeded_points(seed, 8) {
            let j = e.eval_jet2(&p).unwrap();
            let (g, h) = fd_jet(&e, &p, 1e-4);
            for i in 0..3 {
                let gi = j.grad()[i];
                prop_assert!((gi - g[i]).abs() <= 1e-5 * (1.0 + gi.abs()), "grad {} vs {} for {}", gi, g[i], e);
                for k in 0..3 {
                    let hk = j.hess(i, k);
                    prop_assert!((hk - h[i][k]).abs() <= 1e-3 * (1.0 + hk.abs()), "hess {} vs {} for {}", hk, h[i][k], e);
                }
            }
        }
    }

    #[test]
    fn hessian_exactly_symmetric(e in smooth_expr(), seed in any::<u64>()) {
        for p in seeded_points(seed, 4) {
            let m = e.eval_jet2(&p).unwrap().hess_matrix();
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(m[i][j].to_bits(), m[j][i].to_bits());
                }
            }
        }
    }
}
