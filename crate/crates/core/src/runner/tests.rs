use super::*;

const MINIMAL: &str = r#"{
  "name": "minimal",
  "manifolds": [{"name": "E2", "coords": ["x", "y"], "domain": [[-1, 1], [null, null]],
                 "metric": [["1", "0"], ["0", "1"]]}],
  "suites": [{"kind": "flatness", "target": "E2"}]
}"#;

#[test]
fn minimal_scenario_passes() {
    let s = Scenario::from_json(MINIMAL, "inline").unwrap();
    let r = run(&s, &Overrides::default());
    assert!(r.pass, "{}", r.to_json());
    assert_eq!(r.suites[0].suite, "flatness:E2");
    assert_eq!(r.suites[0].checks.len(), 3);
}

#[test]
fn undefined_manifold_is_a_validation_error() {
    let text = MINIMAL.replace(r#""target": "E2""#, r#""target": "B2""#);
    let err = Scenario::from_json(&text, "inline").unwrap_err();
    assert!(matches!(err.root(), Error::Validation { .. }), "{err}");
}

#[test]
fn unknown_symbol_surfaces_at_load() {
    let text = r#"{"name": "bad", "manifolds": [{"name": "L", "coords": ["t"],
        "domain": [[0, 1]], "metric": [["sin(q)"]]}]}"#;
    let err = Scenario::from_json(text, "inline").unwrap_err();
    assert_eq!(err.root(), &Error::UnknownSymbol("q".into()));
}

#[test]
fn syntax_errors_carry_positions() {
    let err = Scenario::from_json("{\"name\": \"x\",\n  \"suites\": [}", "f.json").unwrap_err();
    match err {
        Error::Parse { path, position, .. } => {
            assert_eq!(path, "f.json");
            assert!(position.starts_with("line 2"), "{position}");
        }
        other => panic!("{other:?}"),
    }
    let text = MINIMAL.replace(r#"["1", "0"]"#, r#"["1 +", "0"]"#);
    let err = Scenario::from_json(&text, "inline").unwrap_err();
    assert!(matches!(err.root(), Error::Syntax { position: 3, .. }), "{err}");
}

#[test]
fn field_type_and_chart_are_checked() {
    let text = r#"{"name": "f", "manifolds": [{"name": "E1", "coords": ["x"], "domain": [[0, 1]], "metric": [["1"]]}],
        "fields": [{"name": "s", "chart": "E1", "scalar": "x"}],
        "suites": [{"kind": "soliton", "target": "E1", "field": "s", "lambda": 1}]}"#;
    let err = Scenario::from_json(text, "inline").unwrap_err();
    assert!(matches!(err.root(), Error::Validation { name, .. } if name == "field"), "{err}");
}

#[test]
fn missing_lambda_is_rejected() {
    let text = r#"{"name": "f", "manifolds": [{"name": "E1", "coords": ["x"], "domain": [[0, 1]], "metric": [["1"]]}],
        "fields": [{"name": "v", "chart": "E1", "vector": ["1"]}],
        "suites": [{"kind": "soliton", "target": "E1", "field": "v"}]}"#;
    assert!(Scenario::from_json(text, "inline").is_err());
}

#[test]
fn catalog_lists_required_entries() {
    let names = catalog();
    for n in [
        "euclidean-flat",
        "sphere-unit",
        "hyperbolic-halfplane",
        "polar-warped",
        "sphere-as-warped",
        "direct-product-concurrent",
        "grw-static",
        "grw-milne",
        "grw-exponential",
        "thm21-direct-product",
        "thm22-constant-warping",
    ] {
        assert!(names.contains(&n), "{n}");
    }
    for n in names {
        catalog_scenario(n).unwrap_or_else(|e| panic!("{n}: {e}"));
    }
}

#[test]
fn identities_scenario_and_tolerance_override() {
    let s = catalog_scenario("sphere-warped-identities").unwrap();
    let r = run(&s, &Overrides::default());
    assert!(r.pass);
    assert_eq!(r.suites[0].checks.len(), 4);
    let tight = run(
        &s,
        &Overrides {
            tolerance: Some(1e-17),
            ..Overrides::default()
        },
    );
    assert!(!tight.pass);
    assert_eq!(tight.exit_code(), 1);
}

#[test]
fn hypothesis_failure_is_recorded() {
    let text = r#"{"name": "h", "manifolds": [
        {"name": "B", "coords": ["x"], "domain": [[0, 1]], "metric": [["1"]]},
        {"name": "F", "coords": ["y"], "domain": [[0, 1]], "metric": [["1"]]}],
      "warped": [{"name": "P", "base": "B", "fiber": "F", "warping": "1"}],
      "fields": [{"name": "zb", "chart": "B", "vector": ["0"]}, {"name": "zf", "chart": "F", "vector": ["0"]}],
      "suites": [{"kind": "induced", "target": "P", "base_field": "zb", "fiber_field": "zf", "lambda": 5}]}"#;
    let s = Scenario::from_json(text, "inline").unwrap();
    let r = run(&s, &Overrides::default());
    assert!(!r.pass);
    assert_eq!(r.suites[0].checks[0].status, crate::report::Status::HypothesisFailed);
    assert!(r.to_json().contains("HYPOTHESIS-FAILED"));
}

#[test]
fn parallel_and_sequential_reports_match() {
    let s = catalog_scenario("sphere-unit").unwrap();
    let a = run_with(&s, &Overrides::default(), false).to_json();
    let b = run_with(&s, &Overrides::default(), true).to_json();
    assert_eq!(a, b);
}

#[test]
fn grw_defaults_to_fiber_dimension() {
    let s = catalog_scenario("grw-milne").unwrap();
    let r = run(&s, &Overrides::default());
    assert_eq!(r.suites[0].provenance.n_conv, Some(2));
    assert!(r.pass, "{}", r.to_json());
}

#[test]
fn overrides_change_provenance() {
    let s = catalog_scenario("euclidean-flat").unwrap();
    let r = run(
        &s,
        &Overrides {
            seed: Some(7),
            count: Some(5),
            ..Overrides::default()
        },
    );
    assert!(r.suites.iter().all(|s| s.provenance.seed == 7 && s.provenance.count == 5));
}

#[test]
fn fd_check_covers_every_chart() {
    let s = catalog_scenario("polar-warped").unwrap();
    let r = fd_check_scenario(&s, FD_STEP, &Overrides::default());
    assert_eq!(r.suites.len(), s.chart_names().len());
    assert!(r.pass, "{}", r.to_json());
}
