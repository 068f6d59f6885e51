use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn warpsol(args: &[&str], report_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warpsol"))
        .args(args)
        .env("WARPSOL_REPORT_DIR", report_dir)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn catalog_list_prints_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = warpsol(&["catalog", "list"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "grw-milne"));
    assert!(text.lines().any(|l| l == "euclidean-flat"));
}

#[test]
fn suite_writes_report_to_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = warpsol(&["suite", "sphere-warped-identities", "--quiet"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&dir.path().join("sphere-warped-identities.report.json"));
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["pass"], true);
    let checks = report["suites"][0]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    for key in ["name", "max_residual", "tolerance", "status"] {
        assert!(checks[0].get(key).is_some(), "{key}");
    }
    let prov = &report["suites"][0]["provenance"];
    assert_eq!(prov["seed"], 42);
    assert_eq!(prov["count"], 64);
}

#[test]
fn tight_tolerance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("tight.json");
    let out = warpsol(
        &["suite", "sphere-warped-identities", "--tol", "1e-17", "--out", out_path.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(read_json(&out_path)["pass"], false);
}

#[test]
fn check_runs_a_scenario_file_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("plane.json");
    std::fs::write(
        &scenario,
        r#"{"name": "plane",
            "manifolds": [{"name": "E2", "coords": ["x", "y"], "domain": [[-1, 1], [-1, 1]],
                           "metric": [["1", "0"], ["0", "1"]]}],
            "fields": [{"name": "pos", "chart": "E2", "vector": ["x", "y"]}],
            "suites": [{"kind": "flatness", "target": "E2"},
                       {"kind": "soliton", "target": "E2", "field": "pos", "lambda": 1.5}]}"#,
    )
    .unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let s = scenario.to_str().unwrap();
    assert_eq!(warpsol(&["check", s, "--out", a.to_str().unwrap()], dir.path()).status.code(), Some(0));
    assert_eq!(
        warpsol(&["check", s, "--parallel", "--out", b.to_str().unwrap()], dir.path()).status.code(),
        Some(0)
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn bad_scenario_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("bad.json");
    std::fs::write(
        &scenario,
        r#"{"name": "bad", "manifolds": [{"name": "L", "coords": ["t"], "domain": [[0, 1]], "metric": [["sin(q)"]]}]}"#,
    )
    .unwrap();
    let out = warpsol(&["check", scenario.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown symbol `q`"));
}

#[test]
fn hypothesis_failure_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("h.json");
    std::fs::write(
        &scenario,
        r#"{"name": "h",
            "manifolds": [{"name": "S2", "coords": ["th", "ph"], "domain": [[0, 3.14159], [0, 6.28318]],
                           "metric": [["1", "0"], ["0", "sin(th)^2"]]}],
            "fields": [{"name": "v", "chart": "S2", "vector": ["sin(th)", "0"]}],
            "suites": [{"kind": "concircular", "target": "S2", "field": "v", "lambda": 9}]}"#,
    )
    .unwrap();
    let out = warpsol(&["check", scenario.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("HYPOTHESIS-FAILED"));
}

#[test]
fn fd_check_passes_on_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let out = warpsol(&["fd-check", "sphere-unit", "--h", "1e-4", "--quiet"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn unknown_catalog_entry_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(warpsol(&["suite", "no-such-thing"], dir.path()).status.code(), Some(2));
}
