use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperball")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(o: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(o);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

const FAST: [&str; 4] = ["--sphere-order", "16", "--radial-order", "32"];

#[test]
fn exit_codes() {
    assert_eq!(hyperball(&["verify", "--suite", "special"]).status.code(), Some(0));
    // too coarse to pass its own checks
    let coarse = hyperball(&["verify", "--suite", "quadrature", "--sphere-order", "2"]);
    assert_eq!(coarse.status.code(), Some(1));
    assert!(stdout(&coarse).contains("[FAIL]"));
    // unwritable output is a runtime failure
    assert_eq!(hyperball(&["constants", "-L", "1", "-M", "1", "--out", "/nonexistent/x.json"]).status.code(), Some(1));
    for bad in [
        vec!["verify", "--suite", "nonsense"],
        vec!["extend", "--field", "bogus", "--grid", "ray:1:3:0.5"],
        vec!["extend", "--field", "identity", "--grid", "cube:2:0.9"],
        vec!["constants", "-L", "1", "-M", "1", "--n", "1"],
        vec!["green", "--field", "linear", "--grid", "ray:1:3:0.5", "--fd-step", "0.5"],
        vec!["lipschitz", "--pair", "green:unknown"],
        vec!["frobnicate"],
    ] {
        let o = hyperball(&bad);
        assert_eq!(o.status.code(), Some(2), "{bad:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn outputs_are_deterministic() {
    let args = ["extend", "--field", "cusp", "--grid", "polar:2:3:0.6", "--sphere-order", "12"];
    assert_eq!(hyperball(&args).stdout, hyperball(&args).stdout);
    let scan = ["lipschitz", "--pair", "poisson:coordinate:1", "--pairs", "60", "--seed", "5"];
    assert_eq!(hyperball(&scan).stdout, hyperball(&scan).stdout);
}

#[test]
fn csv_layout_and_row_counts() {
    let o = hyperball(&["extend", "--field", "identity", "--grid", "cube:3:0.2", "--sphere-order", "12"]);
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, ["x1", "x2", "x3", "phi1", "phi2", "phi3", "est_error"]);
    assert_eq!(rows.len(), 27);
    let first = stdout(&o).lines().nth(1).unwrap().to_owned();
    for cell in first.split(',') {
        let mantissa = cell.split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{cell}");
    }
    let (_, rows) = csv_rows(&hyperball(&["green", "--field", "zero", "--grid", "polar:2:5:0.4", "--n", "4", "--sphere-order", "8"]));
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.len() == 9 && r[4..].iter().all(|&v| v == 0.0)));
}

#[test]
fn constant_field_extends_to_constant() {
    let (_, rows) = csv_rows(&hyperball(&["extend", "--field", "constant:2.5", "--grid", "ray:2:6:0.9", "--sphere-order", "12"]));
    for r in rows {
        assert!(r[3..6].iter().all(|v| (v - 2.5).abs() < 1e-12), "{r:?}");
    }
}

#[test]
fn extension_of_coordinate_is_coordinate_plus_green() {
    let grid = ["--grid", "polar:2:4:0.5"];
    let ext = hyperball(&[&["extend", "--field", "coordinate:1"][..], &grid, &FAST].concat());
    let green = hyperball(&[&["green", "--field", "linear"][..], &grid, &FAST].concat());
    let (_, e) = csv_rows(&ext);
    let (_, g) = csv_rows(&green);
    for (a, b) in e.iter().zip(&g) {
        assert!((a[3] - a[0] - b[3]).abs() < 1e-10, "{a:?} vs {b:?}");
        assert!(a[4].abs() < 1e-12 && b[4].abs() < 1e-12);
    }
}

#[test]
fn green_of_decay_field_at_origin() {
    let v = json(&hyperball(&[&["green", "--field", "decay", "--grid", "ray:1:1:0", "--format", "json"][..], &FAST].concat()));
    assert_eq!(v["columns"][3], "G1");
    let g1 = v["rows"][0][3].as_f64().unwrap();
    assert!((g1 - 1.0 / 12.0).abs() < 1e-10, "{g1}");
}

#[test]
fn constants_report() {
    let v = json(&hyperball(&["constants", "-L", "0", "-M", "2"]));
    assert!((v["alpha1"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(v["mu5"].as_f64().unwrap() >= 65.875);
    assert_eq!(v["C1"], v["beta0"]);
    assert!(v["mu22"].is_null());
    let path = tmp("constants.json");
    let o = hyperball(&["constants", "-L", "1", "-M", "2", "--n", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let from_file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(from_file["n"], 4);
}

#[test]
fn config_file_with_flag_overrides() {
    let path = tmp("run.toml");
    std::fs::write(&path, "n = 4\nsphere_order = 8\nformat = \"json\"\n").unwrap();
    let cfg = path.to_str().unwrap();
    let v = json(&hyperball(&["extend", "--config", cfg, "--field", "identity", "--grid", "ray:1:2:0.3"]));
    assert_eq!(v["columns"].as_array().unwrap().len(), 9);
    let o = hyperball(&["extend", "--config", cfg, "--n", "3", "--format", "csv", "--field", "identity", "--grid", "ray:1:2:0.3"]);
    assert_eq!(csv_rows(&o).0.len(), 7);
    std::fs::write(&path, "dimension = 3\n").unwrap();
    assert_eq!(hyperball(&["constants", "-L", "1", "-M", "1", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn lipschitz_report_schema() {
    let v = json(&hyperball(&["lipschitz", "--pair", "identity", "--pairs", "200"]));
    assert_eq!(v["report"]["max_ratio"], 1.0);
    assert_eq!(v["report"]["min_ratio"], 1.0);
    assert_eq!(v["report"]["pairs"], 200);
    assert!(v["bound"].is_null() && v["within_bound"] == true);
    let strata = v["report"]["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 27);
    assert!(strata.iter().all(|s| s["shell"].is_f64() && s["gap"].is_string()));

    let v = json(&hyperball(&["lipschitz", "--pair", "green:decay", "--pairs", "100"]));
    assert_eq!(v["bound_name"], "beta0");
    assert_eq!(v["bound"], v["constants"]["beta0"]);
    assert!(v["report"]["max_ratio"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());
}

#[test]
fn verify_writes_a_report() {
    let path = tmp("verify.json");
    let o = hyperball(&["verify", "--suite", "geometry", "--n", "4", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(v["suite"], "geometry");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), checks.len());
    assert!(checks.iter().all(|c| c["passed"] == true));
}
