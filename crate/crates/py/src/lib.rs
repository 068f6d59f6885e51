//! Python bindings. Reports cross the boundary as JSON strings; matrices as
//! nested lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::warpsol::curvature::Geometry;
use ::warpsol::runner::{self, Overrides, Scenario};
use ::warpsol::soliton;
use ::warpsol::{mu_value as core_mu, parse_expr, ChartManifold, Error, Interval, Point, SolitonParams};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn chart(coords: Vec<String>, metric: Vec<Vec<String>>) -> Result<ChartManifold, Error> {
    let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let parsed = metric
        .iter()
        .map(|row| row.iter().map(|t| parse_expr(t, &refs)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let domain = vec![Interval::unbounded(); coords.len()];
    ChartManifold::new("py", coords, parsed, domain)
}

fn geometry(coords: Vec<String>, metric: Vec<Vec<String>>, point: Vec<f64>) -> PyResult<Geometry> {
    let m = chart(coords, metric).map_err(py_err)?;
    let p = Point::new(point).map_err(py_err)?;
    Geometry::at(&m, &p).map_err(py_err)
}

fn overrides(tol: Option<f64>, seed: Option<u64>, count: Option<usize>) -> Overrides {
    Overrides {
        tolerance: tol,
        seed,
        count,
    }
}

/// `(value, gradient, hessian)` of an expression at a point.
#[pyfunction]
fn eval_jet(expr: &str, coords: Vec<String>, point: Vec<f64>) -> PyResult<(f64, Vec<f64>, Vec<Vec<f64>>)> {
    let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let e = parse_expr(expr, &refs).map_err(py_err)?;
    let j = e.eval_jet2(&point).map_err(py_err)?;
    Ok((j.value(), j.grad().to_vec(), j.hess_matrix()))
}

#[pyfunction]
fn ricci(coords: Vec<String>, metric: Vec<Vec<String>>, point: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
    let g = geometry(coords, metric, point)?;
    Ok(g.ricci.row_iter().map(|r| r.iter().copied().collect()).collect())
}

#[pyfunction]
fn scalar_curvature(coords: Vec<String>, metric: Vec<Vec<String>>, point: Vec<f64>) -> PyResult<f64> {
    Ok(geometry(coords, metric, point)?.scalar)
}

/// `gamma[k][i][j]`
#[pyfunction]
fn christoffel(coords: Vec<String>, metric: Vec<Vec<String>>, point: Vec<f64>) -> PyResult<Vec<Vec<Vec<f64>>>> {
    let g = geometry(coords, metric, point)?;
    let d = g.dim();
    Ok((0..d)
        .map(|k| (0..d).map(|i| (0..d).map(|j| g.christoffel.get(k, i, j)).collect()).collect())
        .collect())
}

/// `2λ − (p + 2/n)`
#[pyfunction]
fn mu_value(lambda: f64, pressure: f64, n: u32) -> PyResult<f64> {
    Ok(core_mu(&SolitonParams::new(lambda, pressure, n).map_err(py_err)?))
}

/// `(λ, "shrinking" | "steady" | "expanding")`
#[pyfunction]
fn concircular_lambda(alpha: f64, pressure: f64, n: u32) -> (f64, String) {
    let l = soliton::concircular_lambda(alpha, pressure, n);
    let kind = serde_json::to_value(l.kind).ok().and_then(|v| v.as_str().map(String::from));
    (l.lambda, kind.unwrap_or_default())
}

#[pyfunction]
fn warping_quadratic_residual(f: f64, xi_b_f: f64, rho: f64, mu: f64, beta: f64, k: f64, n: u32) -> f64 {
    soliton::warping_quadratic_residual(f, xi_b_f, rho, mu, beta, k, n)
}

#[pyfunction]
fn catalog() -> Vec<&'static str> {
    runner::catalog()
}

/// Runs a built-in scenario and returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (name, tol=None, seed=None, count=None))]
fn run_catalog(name: &str, tol: Option<f64>, seed: Option<u64>, count: Option<usize>) -> PyResult<String> {
    let s = runner::catalog_scenario(name).map_err(py_err)?;
    Ok(runner::run(&s, &overrides(tol, seed, count)).to_json())
}

/// Runs scenario JSON text and returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (scenario_json, tol=None, seed=None, count=None))]
fn check_scenario(scenario_json: &str, tol: Option<f64>, seed: Option<u64>, count: Option<usize>) -> PyResult<String> {
    let s = Scenario::from_json(scenario_json, "<python>").map_err(py_err)?;
    Ok(runner::run(&s, &overrides(tol, seed, count)).to_json())
}

#[pymodule]
#[pyo3(name = "warpsol")]
fn warpsol_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(eval_jet, m)?)?;
    m.add_function(wrap_pyfunction!(ricci, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(christoffel, m)?)?;
    m.add_function(wrap_pyfunction!(mu_value, m)?)?;
    m.add_function(wrap_pyfunction!(concircular_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(warping_quadratic_residual, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(run_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(check_scenario, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
