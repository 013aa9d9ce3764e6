use std::path::Path;
use std::process::{Command, Output};

use dpsbm::GroundTruth;
use serde_json::Value;

fn dpsbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpsbm")).args(args).output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = dpsbm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const MODEL: &[&str] = &["--variant", "basbm", "--a", "15", "--b", "1", "--rho", "0.4"];

fn generated(dir: &Path) -> (String, String) {
    let (g, t) = (dir.join("g.txt"), dir.join("t.json"));
    let mut args = vec!["generate", "--n", "120", "--seed", "3", "--out", p(&g), "--truth-out", p(&t)];
    args.extend_from_slice(MODEL);
    let out = dpsbm(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    (p(&g).to_owned(), p(&t).to_owned())
}

#[test]
fn generate_then_recover() {
    let dir = tempfile::tempdir().unwrap();
    let (g, t) = generated(dir.path());
    let mut args = vec!["recover", "--graph", &g];
    args.extend_from_slice(MODEL);
    let v = ok_json(&args);
    let found: GroundTruth = serde_json::from_value(v["partition"].clone()).unwrap();
    let truth: GroundTruth = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(found.canonical(), truth.canonical());
    assert_eq!(v["status"], "Converged");
}

#[test]
fn generate_to_stdout_is_an_edge_list() {
    let args = ["generate", "--n", "20", "--seed", "1", "--variant", "basbm", "--a", "4", "--b", "1"];
    let out = dpsbm(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n 20 simple\n"));
    assert!(dpsbm::Graph::from_edge_list(&text).is_ok());
}

#[test]
fn certify_and_check_the_planted_partition() {
    let dir = tempfile::tempdir().unwrap();
    let (g, t) = generated(dir.path());
    let mut args = vec!["certify", "--graph", &g, "--truth", &t];
    args.extend_from_slice(MODEL);
    assert_eq!(ok_json(&args)["valid"], true);

    let mut args = vec!["check-concentration", "--graph", &g, "--truth", &t, "--eps", "2"];
    args.extend_from_slice(MODEL);
    let v = ok_json(&args);
    assert!(v["pass"].is_boolean());
    assert!(v["conditions"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn private_recover_prints_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = generated(dir.path());
    let mut args = vec!["private-recover", "--graph", &g, "--eps", "2", "--seed", "5", "--budget-ms", "20000"];
    args.extend_from_slice(MODEL);
    let v = ok_json(&args);
    assert!(v["trace"]["d_hat"].is_number());
    assert!(v["trace"]["threshold"].as_f64().unwrap() > 0.0);
    // same seed, same noise
    assert_eq!(ok_json(&args), v);
}

#[test]
fn estimate_params_reports_all_fields() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = generated(dir.path());
    let v = ok_json(&["estimate-params", "--graph", &g]);
    for k in ["a", "b", "rho"] {
        assert!(v[k].is_number(), "{k}");
    }
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let csv = dir.path().join("out.csv");
    std::fs::write(&cfg, r#"{"variant": "basbm", "trials": 2, "grid": {"n": [40], "a": [8], "b": [1]}}"#).unwrap();
    let out = dpsbm(&["sweep", "--config", p(&cfg), "--output", p(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], dpsbm::harness::CSV_HEADER.join(","));
    assert_eq!(lines.len(), 1 + 2 + 1);
    assert!(lines[3].contains(",agg,"));
}

#[test]
fn exit_codes() {
    assert_eq!(dpsbm(&["--help"]).status.code(), Some(0));
    assert_eq!(dpsbm(&["--version"]).status.code(), Some(0));
    assert_eq!(dpsbm(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dpsbm(&["generate", "--n", "10", "--variant", "basbm", "--a", "2"]).status.code(), Some(1));
    assert_eq!(dpsbm(&["recover", "--graph", "/nonexistent", "--variant", "basbm", "--a", "2", "--b", "1"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "n 3 simple\n0 9\n").unwrap();
    let out = dpsbm(&["estimate-params", "--graph", p(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    // a regular graph parses but the estimate degenerates
    let ring = dir.path().join("ring.txt");
    std::fs::write(&ring, "n 4 simple\n0 1\n1 2\n2 3\n0 3\n").unwrap();
    assert_eq!(dpsbm(&["estimate-params", "--graph", p(&ring)]).status.code(), Some(2));
}
