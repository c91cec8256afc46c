use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn sweepout(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sweepout"))
        .arg(cmd)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn report(out: &Path, cmd: &str) -> Value {
    let text = std::fs::read_to_string(out.join(format!("{cmd}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn check_conditions_on_geometric_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let o = sweepout(
        "check-conditions",
        &config("geometric.json"),
        dir.path(),
        &[],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = report(dir.path(), "check-conditions");
    assert_eq!(r["status"], "ok");
    let names: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"condition_a"));
    assert!(names.contains(&"condition_one[1/100]"));
    assert!(dir.path().join("chebyshev.csv").exists());
}

#[test]
fn out_of_range_delta_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg: Value =
        serde_json::from_str(&std::fs::read_to_string(config("geometric.json")).unwrap()).unwrap();
    cfg["params"]["delta"] = "1.5".into();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    let o = sweepout("build-witness", &path, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("(0, 1)"), "{stderr}");
    assert_eq!(
        report(dir.path(), "build-witness")["status"],
        "config_error"
    );
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.json");
    std::fs::write(&path, r#"{"basis": {"generators": []}, "measures": {"kind": "explicit", "list": []}, "parms": {}}"#).unwrap();
    let o = sweepout("decompose", &path, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn corrupted_witness_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("geometric.json");
    let o = sweepout("build-witness", &cfg, dir.path(), &[]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let path = dir.path().join("witness.json");
    let mut w: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    w["factors"][1]["g"][0]["coeffs"][0] = "1/1000".into();
    std::fs::write(&path, serde_json::to_string_pretty(&w).unwrap()).unwrap();

    let o = sweepout("verify", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(
        stderr.contains("factor_sup[1]") || stderr.contains("pair[1]"),
        "{stderr}"
    );
    let r = report(dir.path(), "verify");
    assert_eq!(r["status"], "verification_failed");
    assert!(r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["pass"] == false));
}

#[test]
fn csv_format_prints_main_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = sweepout(
        "lattice-count",
        &config("geometric.json"),
        dir.path(),
        &["--format", "csv"],
    );
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("m,count,predicted,ratio\n"));
    assert_eq!(stdout.lines().count(), 9);
}

#[test]
fn dirac_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let o = sweepout("find-lambda", &config("dirac.json"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path(), "find-lambda");
    assert_eq!(r["result"]["choice"]["lambda"], "26/675");
}
