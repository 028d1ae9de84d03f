use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diagmon")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn analyze_tl4_classical() {
    let v = json(&["analyze", "--flavor", "tl", "--n", "4", "--params", "classical"]);
    assert_eq!(v["simple_dims"], serde_json::json!({"4": 1, "2": 3, "0": 1}));
}

#[test]
fn analyze_params_grammar() {
    let zero = json(&["analyze", "--flavor", "tl", "--n", "4", "--params", "a1=0"]);
    assert_eq!(zero["simple_dims"], serde_json::json!({"4": 1, "2": 2}));
    let generic = json(&["analyze", "--flavor", "tl", "--n", "4", "--params", "generic", "--seed", "3"]);
    assert_eq!(generic["simple_dims"], serde_json::json!({"4": 1, "2": 3, "0": 2}));
    let spelled = json(&["analyze", "--flavor", "tl", "--n", "3", "--params", "prefix=1,0;period=1"]);
    assert_eq!(spelled["params"], "prefix=1,0;period=1");
}

#[test]
fn nonss_tl4_at_l2() {
    let v = json(&["nonss", "--family", "tl", "--n", "4", "--l", "2"]);
    let rows: Vec<(u64, String)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["k"].as_u64().unwrap(), r["b"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(rows, vec![(2, "2".to_string()), (4, "1".to_string())]);
    assert!(v["asymptotic"]["bounds_ok"].is_boolean());
    let csv = run(&["nonss", "--family", "tl", "--n", "4", "--l", "2", "--csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "n,k,b\n4,2,2\n4,4,1\n");
}

#[test]
fn enumerate_counts() {
    assert_eq!(json(&["enumerate", "--flavor", "motzkin", "--n", "2", "--count-only"]), serde_json::json!({"count": 9}));
    let v = json(&["enumerate", "--flavor", "tl", "--n", "2"]);
    assert_eq!(v["diagrams"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["enumerate", "--flavor", "tl"]).status.code(), Some(1));
    assert_eq!(run(&["enumerate", "--flavor", "tl", "--n", "2", "--unknown"]).status.code(), Some(1));
    assert_eq!(run(&["enumerate", "--flavor", "nope", "--n", "2"]).status.code(), Some(1));
    let over = run(&["enumerate", "--flavor", "partition", "--n", "7", "--count-only"]);
    assert_eq!(over.status.code(), Some(3));
    assert!(!over.stderr.is_empty() && over.stdout.is_empty());
    assert_eq!(run(&["enumerate", "--flavor", "tl", "--n", "4", "--count-only", "--budget", "3"]).status.code(), Some(3));
    assert_eq!(run(&["twist-check", "--flavor", "tl", "--n", "3", "--M", "saturating:5"]).status.code(), Some(0));
    // Loose twisting: the theorem checks refuse.
    assert_eq!(run(&["twist-check", "--flavor", "mo", "--n", "2", "--M", "saturating:5"]).status.code(), Some(2));
    assert_eq!(run(&["twist-check", "--flavor", "tl", "--n", "2", "--M", "cyclic:3"]).status.code(), Some(2));
    assert_eq!(run(&["verify-all", "--suite", "no-such-suite"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["analyze", "--flavor", "mo", "--n", "3", "--params", "generic", "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn walks_and_verification() {
    let out = run(&["concentrate", "--flavor", "tl", "--n", "64", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,prob,gaussian_pred\n"));
    let v = json(&["plancherel", "--t", "5", "--steps", "10"]);
    assert_eq!(v["tv"].as_array().unwrap().len(), 10);
    let v = json(&["verify-all", "--suite", "partition-predicate"]);
    assert_eq!(v[0]["pass"], true);
}
