use std::path::PathBuf;

use warpcheck::comparison::Verdict;
use warpcheck::scenario::{
    emit_tables, run_scenario, run_scenario_str, run_suite, to_csv, to_json, EntryDetail, Family, OutputFormat, RunOverrides,
    RunReport, ScenarioError, CSV_HEADER,
};
use warpcheck::spectrum::OdeCoefficient;

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.json"))
}

fn run_file(name: &str) -> Result<RunReport, ScenarioError> {
    run_scenario(&scenario_path(name), &RunOverrides::default())
}

const SLAB: &str = r#"{
  "schema_version": 1,
  "name": "slab",
  "params": { "n": 2, "N": 2 },
  "instance": { "kind": "profile", "w": "1", "t_max": 1.0, "topology": "two_ended",
                "fiber": { "kind": "torus", "volume": 1.0 } },
  "checks": ["riccati", { "id": "p-laplacian", "p": [2.0] }]
}"#;

#[test]
fn cylinder_all_checks_pass() {
    let r = run_file("cylinder-all-checks").unwrap();
    assert_eq!(r.exit_code(), 0);
    assert!(!r.entries.is_empty());
    for e in &r.entries {
        assert!(matches!(e.verdict, Verdict::Equality | Verdict::Holds), "{} {:?}", e.check_id, e.verdict);
    }
    for id in ["riccati", "boundary-laplacian", "volume-element", "volume-comparison"] {
        let e = r.entries.iter().find(|e| e.check_id == id).unwrap();
        assert_eq!(e.verdict, Verdict::Equality, "{id}");
    }
}

#[test]
fn forbidden_dimension_is_rejected() {
    let err = run_file("forbidden-N").unwrap_err();
    assert!(matches!(err, ScenarioError::Params(_)));
    assert!(err.to_string().contains("N in ]1,n[ forbidden"), "{err}");
}

#[test]
fn equality_model_reaches_equality() {
    let r = run_file("equality-model-N5-eps05").unwrap();
    assert_eq!(r.exit_code(), 0);
    for id in ["riccati", "boundary-laplacian", "cut-bound"] {
        let e = r.entries.iter().find(|e| e.check_id == id).unwrap();
        assert_eq!(e.verdict, Verdict::Equality, "{id} {:?}", e.worst_margin);
    }
}

#[test]
fn parse_errors_carry_position() {
    let err = run_scenario_str("{\n  \"schema_version\": 1,\n  \"name\": ]\n}", &RunOverrides::default()).unwrap_err();
    match err {
        ScenarioError::Parse { line, column, .. } => assert_eq!((line, column), (3, 11)),
        other => panic!("{other}"),
    }
    let unknown_field = SLAB.replace("\"checks\"", "\"chekcs\": [],\n  \"checks\"");
    assert!(matches!(run_scenario_str(&unknown_field, &RunOverrides::default()), Err(ScenarioError::Parse { .. })));
}

#[test]
fn configuration_errors() {
    let ov = RunOverrides::default();
    let unknown = SLAB.replace("\"riccati\"", "\"ricatti\"");
    assert!(matches!(run_scenario_str(&unknown, &ov), Err(ScenarioError::UnknownCheck(id)) if id == "ricatti"));
    let version = SLAB.replace("\"schema_version\": 1", "\"schema_version\": 7");
    assert!(matches!(run_scenario_str(&version, &ov), Err(ScenarioError::UnsupportedVersion(7))));
    let splitting = SLAB.replace("\"riccati\"", "\"splitting-model\"");
    assert!(matches!(run_scenario_str(&splitting, &ov), Err(ScenarioError::MissingArgument { .. })));
    let bad_tol = RunOverrides { tol: Some(-1.0), ..RunOverrides::default() };
    assert!(matches!(run_scenario_str(SLAB, &bad_tol), Err(ScenarioError::Override(_))));
    let missing = scenario_path("does-not-exist");
    let err = run_scenario(&missing, &ov).unwrap_err();
    assert!(err.to_string().contains("does-not-exist.json"), "{err}");
}

#[test]
fn overrides_change_the_digest() {
    let base = run_scenario_str(SLAB, &RunOverrides::default()).unwrap();
    let again = run_scenario_str(SLAB, &RunOverrides::default()).unwrap();
    assert_eq!(to_json(&base), to_json(&again));
    let ov = RunOverrides { grid: Some(64), tol: Some(1e-6), seed: Some(3), ode_coeff: Some(OdeCoefficient::NMinusOne) };
    let other = run_scenario_str(SLAB, &ov).unwrap();
    assert_ne!(base.input_digest, other.input_digest);
    assert_eq!(other.seed, 3);
    assert_eq!(other.options.points, 64);
    assert_eq!(other.tolerances.check, 1e-6);
    assert_eq!(other.ode_coeff, OdeCoefficient::NMinusOne);
}

#[test]
fn random_instance_follows_the_seed() {
    let text = r#"{
      "schema_version": 1,
      "name": "random",
      "seed": 11,
      "params": { "n": 3, "N": "inf", "eps": 0.2 },
      "instance": { "kind": "random", "family": "collar" },
      "checks": ["riccati"]
    }"#;
    let a = run_scenario_str(text, &RunOverrides::default()).unwrap();
    let b = run_scenario_str(text, &RunOverrides::default()).unwrap();
    let c = run_scenario_str(text, &RunOverrides { seed: Some(12), ..RunOverrides::default() }).unwrap();
    assert_eq!(a.instances[0].instance, b.instances[0].instance);
    assert_ne!(a.instances[0].instance, c.instances[0].instance);
    assert_eq!(a.exit_code(), 0);
}

#[test]
fn suites_are_deterministic() {
    let a = to_json(&run_suite(Family::RandomCollar, 200, 42));
    let b = to_json(&run_suite(Family::RandomCollar, 200, 42));
    assert!(a == b, "reports differ");
    let r: RunReport = serde_json::from_str(&a).unwrap();
    assert_eq!(r.exit_code(), 0);
    assert_eq!(r.instances.len(), 200);
    assert_eq!(r.instances[0].instance_id, "random-collar-00000");
    let sorted = r.entries.windows(2).all(|w| (&w[0].check_id, &w[0].instance_id) <= (&w[1].check_id, &w[1].instance_id));
    assert!(sorted);
}

#[test]
fn equality_suite_margins_vanish() {
    let r = run_suite(Family::EqualityModels, 50, 7);
    assert_eq!(r.errors, 0);
    assert_eq!(r.entries.len(), 150);
    for e in &r.entries {
        assert_eq!(e.verdict, Verdict::Equality, "{} {}", e.check_id, e.instance_id);
        let EntryDetail::Comparison { report } = &e.detail else { panic!("comparison expected") };
        for s in &report.samples {
            assert!(s.margin.abs() <= 1e-6 && s.raw_slack().abs() <= 1e-6, "{} {} {s:?}", e.check_id, e.instance_id);
        }
    }
}

#[test]
fn eigen_suite_agreement() {
    let r = run_suite(Family::EigenSuite, 20, 1);
    assert_eq!(r.entries.len(), 20);
    assert_eq!(r.exit_code(), 0);
    for e in &r.entries {
        let EntryDetail::Agreement { relative_difference, tolerance, .. } = e.detail else { panic!("agreement expected") };
        assert_eq!(tolerance, 1e-4);
        assert!(relative_difference <= 1e-4, "{} {relative_difference}", e.instance_id);
    }
}

#[test]
fn csv_layout() {
    let r = run_scenario_str(SLAB, &RunOverrides::default()).unwrap();
    let csv = to_csv(&r);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("check_id,instance_id,t_or_s,lhs,rhs,margin"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|l| l.split(',').count() == 6));
    assert!(rows.iter().any(|l| l.starts_with("p-laplacian[p=2].radial:inner,slab,")));
    assert!(rows.iter().any(|l| l.starts_with("riccati.inner,slab,")));

    let agreement = to_csv(&run_suite(Family::EigenSuite, 2, 5));
    assert_eq!(agreement.lines().count(), 3);
    assert!(agreement.lines().nth(1).unwrap().starts_with("eigen-agreement,eigen-suite-00000,"));
}

#[test]
fn empty_reports_emit_headers_only() {
    let r = run_suite(Family::RandomBall, 0, 1);
    assert!(r.entries.is_empty() && r.summary.is_empty());
    assert_eq!(to_csv(&r), format!("{CSV_HEADER}\n"));
    let dir = tempfile::tempdir().unwrap();
    let written = emit_tables(&r, dir.path(), OutputFormat::Csv).unwrap();
    assert_eq!(written.len(), 2);
    assert_eq!(std::fs::read_to_string(dir.path().join("margins.csv")).unwrap(), format!("{CSV_HEADER}\n"));
    let back: RunReport = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn json_round_trips() {
    let r = run_file("cylinder-all-checks").unwrap();
    let back: RunReport = serde_json::from_str(&to_json(&r)).unwrap();
    assert_eq!(back, r);
    let dir = tempfile::tempdir().unwrap();
    let written = emit_tables(&r, &dir.path().join("nested"), OutputFormat::Json).unwrap();
    assert_eq!(written, vec![dir.path().join("nested").join("report.json")]);
}
