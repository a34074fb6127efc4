use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbilliard"))
        .args(args)
        .env_remove("NBILLIARD_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn radians(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|a| a["radians"].as_f64().unwrap()).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nbilliard-test-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn angles_equal_masses_planar() {
    let out = run(&["angles", "--n", "3", "--m", "2", "--masses", "1,1,1", "--pairs", "12,23"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let got = radians(&v["computed"]);
    assert_eq!(got.len(), 4);
    assert!(got[0] < 1e-12 && got[1] < 1e-12);
    assert_eq!(v["computed"][3]["symbolic"], "pi/3");
    assert_eq!(v["config"]["pairs"][1], "23");
    assert_eq!(v["pass"], true);
}

#[test]
fn angles_disjoint_pairs_are_orthogonal() {
    let out = run(&["angles", "--n", "4", "--m", "1", "--masses", "1,1,1,1", "--pairs", "12,34"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["computed"][2]["symbolic"], "pi/2");
}

#[test]
fn angles_heavy_middle_particle() {
    let out = run(&["angles", "--n", "3", "--m", "1", "--masses", "1,4,1", "--pairs", "12,23"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let last = *radians(&v["computed"]).last().unwrap();
    assert!((last - 0.2f64.acos()).abs() < 1e-11);
    // The closed-form quotient as printed gives a right angle here.
    assert_eq!(v["printed_formula_angle"]["symbolic"], "pi/2");
}

#[test]
fn angles_usage_errors() {
    assert_eq!(run(&["angles", "--n", "3", "--pairs", "12"]).status.code(), Some(2));
    assert_eq!(run(&["angles", "--n", "3", "--pairs", "12,45"]).status.code(), Some(2));
    assert_eq!(run(&["angles", "--n", "3", "--masses", "1,1", "--pairs", "12,23"]).status.code(), Some(2));
    assert_eq!(run(&["angles", "--n", "3", "--masses", "1,-1,1", "--pairs", "12,23"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn simulate_equal_masses() {
    let out = run(&["simulate", "--masses", "1,1,1", "--trials", "10", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["max_count"].as_u64().unwrap() <= 3);
    assert_eq!(v["config"]["seed"], 1);
    assert_eq!(v["config"]["sampling"], "phase-slice");

    let out = run(&["simulate", "--masses", "1,1,1", "--trials", "20000", "--seed", "7"]);
    let v = json(&out);
    assert_eq!(v["max_count"], 3);
    assert_eq!(v["foch_sequences"], 0);
}

#[test]
fn simulate_unequal_masses_within_bound() {
    let out = run(&["simulate", "--masses", "2,1,3", "--trials", "20000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["max_count"].as_u64().unwrap() <= v["bound"].as_u64().unwrap());
    assert_eq!(v["above_bound"], 0);
}

#[test]
fn simulate_is_reproducible() {
    let dir = scratch("sim");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let args = ["simulate", "--masses", "1,2,3", "--trials", "3000", "--seed", "9", "--output"];
    run(&[&args[..], &[a.to_str().unwrap()]].concat());
    let mut seq = vec!["--sequential"];
    seq.extend_from_slice(&args);
    seq.push(b.to_str().unwrap());
    run(&seq);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(run(&["simulate", "--masses", "1,1"]).status.code(), Some(2));
}

#[test]
fn grid_csv_is_deterministic_and_symmetric() {
    let dir = scratch("grid");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    assert_eq!(run(&["grid", "--output", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["--sequential", "grid", "--output", b.to_str().unwrap()]).status.code(), Some(0));
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());

    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,beta,bound,flag"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 200 * 200);
    assert_eq!(rows[0][..2], ["0.050000", "0.050000"]);
    assert_eq!(rows.last().unwrap()[..2], ["10.000000", "10.000000"]);
    assert!(text.contains("\n1.000000,1.000000,3,0\n"));
    let lookup: std::collections::HashMap<(&str, &str), &str> =
        rows.iter().map(|r| ((r[0], r[1]), r[2])).collect();
    for r in &rows {
        assert_eq!(lookup[&(r[1], r[0])], r[2]);
    }
}

#[test]
fn grid_output_locations() {
    assert_eq!(run(&["grid", "--output", "/proc/no-such-dir/grid.csv"]).status.code(), Some(4));
    let dir = scratch("env");
    let out = Command::new(env!("CARGO_BIN_EXE_nbilliard"))
        .args(["grid", "--step", "1"])
        .env("NBILLIARD_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(dir.join("grid.csv")).unwrap().lines().count(), 101);
    assert_eq!(run(&["grid", "--step", "-1"]).status.code(), Some(2));
}

#[test]
fn verify_all_filter_and_quick_mode() {
    let out = run(&["verify-all", "--only", "spherical"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["suite"] == "spherical"));

    let quick = run(&["verify-all", "--seed", "42", "--trials", "1000"]);
    let full = run(&["verify-all"]);
    assert_eq!(quick.status.code(), Some(0), "{}", String::from_utf8_lossy(&quick.stderr));
    assert_eq!(full.status.code(), Some(0), "{}", String::from_utf8_lossy(&full.stderr));
    let names = |o: &Output| -> Vec<(String, bool)> {
        json(o)["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["name"].as_str().unwrap().to_string(), c["pass"].as_bool().unwrap()))
            .collect()
    };
    assert_eq!(names(&quick), names(&full));
    assert_eq!(run(&["verify-all", "--only", "nope"]).status.code(), Some(2));
}
