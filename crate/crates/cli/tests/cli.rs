use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riesz-ned")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn mixing_reports_worked_values() {
    let inst = fixture("mixing_4atom.json");
    let out = run(&["mixing", "--instance", inst.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let coeffs = report["suites"][0]["coefficients"].as_array().unwrap();
    let value = |kind: &str| {
        coeffs
            .iter()
            .find(|c| c["pair"] == "U|V" && c["kind"] == kind)
            .and_then(|c| c["value"].as_f64())
            .unwrap()
    };
    assert_eq!(value("alpha"), 0.125);
    assert_eq!(value("phi"), 0.25);
}

#[test]
fn ar1_demo_defect_table_has_nonnegative_slack() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ar1.csv");
    let out = run(&[
        "ar1-demo",
        "--scenario",
        fixture("ar1_theta_half.json").to_str().unwrap(),
        "--seed",
        "7",
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&out_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["suite", "property", "instance", "n", "m", "block", "lhs", "rhs", "slack", "pass"]
    );
    let mut defect_rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        // Zero defects are computed with rounding residue of order 1e-16.
        let slack: f64 = rec[8].parse().unwrap();
        assert!(slack >= -1e-9 && &rec[9] == "true", "{rec:?}");
        if &rec[1] == "ar1_defect_bound[p=2]" {
            defect_rows += 1;
        }
    }
    // 64 indices × gaps 0..=64, one block per row for the generated T.
    assert!(defect_rows >= 64 * 65, "{defect_rows}");
}

#[test]
fn malformed_instance_fails_with_record() {
    let out = run(&["validate", "--instance", fixture("malformed.json").to_str().unwrap()]);
    assert!(!out.status.success());
    let report = json(&out);
    assert_eq!(report["pass"], false);
    let err = report["suites"][0]["error"].as_str().unwrap();
    assert!(err.contains("weights[1]") && err.contains("line 3"), "{err}");
}

#[test]
fn minimal_instance_validates() {
    let out = run(&["validate", "--instance", fixture("minimal.json").to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn generate_is_deterministic_and_guarded() {
    let a = run(&["generate", "--seed", "1", "--atoms", "4", "--partitions", "2"]);
    let b = run(&["generate", "--seed", "1", "--atoms", "4", "--partitions", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    riesz_ned::Instance::parse(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    let too_big = run(&["generate", "--atoms", "65"]);
    assert!(!too_big.status.success());
    assert!(String::from_utf8_lossy(&too_big.stderr).contains("65"));
}

#[test]
fn flag_ranges_are_enforced() {
    assert!(!run(&["mixing", "--cap", "0"]).status.success());
    assert!(!run(&["ned", "--window", "1"]).status.success());
}

#[test]
fn too_short_lln_window_is_an_error_not_a_pass() {
    let out = run(&["lln", "--window", "100"]);
    assert!(!out.status.success());
    assert!(json(&out)["suites"][0]["error"].as_str().unwrap().contains("window"));
}

#[test]
fn csv_side_table_for_mixing() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("mix.csv");
    let inst = fixture("mixing_4atom.json");
    let out = run(&["mixing", "--instance", inst.to_str().unwrap(), "--format", "csv", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let side = std::fs::read_to_string(dir.path().join("mix.coefficients.csv")).unwrap();
    assert!(side.starts_with("instance,pair,m,kind,block,value\n"));
    assert!(side.contains("mixing_4atom,U|V,,alpha,0,0.125\n"));
    assert!(side.contains("mixing_4atom,U|V,,phi,0,0.25\n"));
}
