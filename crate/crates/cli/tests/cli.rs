use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.json"))
}

fn verify(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_verify"));
    cmd.args(args).env_remove("VERIFY_THREADS");
    if let Some(t) = threads {
        cmd.env("VERIFY_THREADS", t);
    }
    cmd.output().expect("verify runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_tables_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario("cylinder-all-checks");
    let out = dir.path().to_str().unwrap();
    let o = verify(&["run", path.to_str().unwrap(), "--out", out, "--format", "csv"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("margins.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("check_id,instance_id,t_or_s,lhs,rhs,margin"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["violated"], 0);
    assert!(stderr(&o).contains("wall time"));
}

#[test]
fn run_prints_json_to_stdout() {
    let path = scenario("equality-model-N5-eps05");
    let o = verify(&["run", path.to_str().unwrap(), "--grid", "128", "--tol", "1e-6"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["options"]["points"], 128);
    assert_eq!(json["tolerances"]["check"], 1e-6);
    assert!(json["entries"].as_array().unwrap().iter().all(|e| e["verdict"] == "equality"));
}

#[test]
fn violations_exit_with_one() {
    let path = scenario("mirrored-equality-coefficient-drift");
    let ok = verify(&["run", path.to_str().unwrap()], None);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let bad = verify(&["run", path.to_str().unwrap(), "--ode-coeff", "n-minus-one"], None);
    assert_eq!(bad.status.code(), Some(1), "{}", stderr(&bad));
    assert!(stderr(&bad).contains("violated: 1"));
    let alias = verify(&["run", path.to_str().unwrap(), "--ode-coeff", "paper"], None);
    assert_eq!(alias.status.code(), Some(1), "{}", stderr(&alias));
}

#[test]
fn configuration_errors_exit_with_two() {
    let forbidden = verify(&["run", scenario("forbidden-N").to_str().unwrap()], None);
    assert_eq!(forbidden.status.code(), Some(2));
    assert!(stderr(&forbidden).contains("N in ]1,n[ forbidden"));

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"schema_version\": 1,\n  oops\n}\n").unwrap();
    let o = verify(&["run", broken.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    assert_eq!(verify(&["run", "missing.json"], None).status.code(), Some(2));
    assert_eq!(verify(&["suite", "no-such-family", "--count", "1", "--seed", "1"], None).status.code(), Some(2));
    assert_eq!(verify(&["run", scenario("cylinder-all-checks").to_str().unwrap(), "--format", "xml"], None).status.code(), Some(2));
    assert_eq!(verify(&["suite", "eigen-suite", "--count", "1", "--seed", "1"], Some("zero")).status.code(), Some(2));
}

#[test]
fn suites_are_byte_identical_across_thread_counts() {
    let args = ["suite", "random-collar", "--count", "20", "--seed", "42"];
    let one = verify(&args, Some("1"));
    let four = verify(&args, Some("4"));
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert!(one.stdout == four.stdout, "reports differ");

    let eigen = verify(&["suite", "eigen-suite", "--count", "20", "--seed", "1", "--format", "csv"], None);
    assert_eq!(eigen.status.code(), Some(0));
    let csv = String::from_utf8(eigen.stdout).unwrap();
    assert_eq!(csv.lines().count(), 21);
}
