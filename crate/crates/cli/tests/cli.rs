use std::io::Write;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = vstar_cli::run(std::iter::once("vstar").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out, err) = run(&all);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn defeq_top_nei_is_verified() {
    let (code, v) = run_json(&["defeq", "top-nei", "--max-atoms", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "verified");
}

#[test]
fn obstruct_set1_set2_is_refuted() {
    let (code, v) = run_json(&["obstruct", "set1", "set2"]);
    assert_eq!(code, 2);
    assert_eq!(v["counterexample"]["aut_order"], 1);
    assert_eq!(v["counterexample"]["compared_with"][0]["aut_order"], 2);
}

#[test]
fn obstruct_top_nei_is_unknown() {
    let (code, v) = run_json(&["obstruct", "top", "nei"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "unknown");
}

#[test]
fn lists_topologies() {
    let (code, v) = run_json(&["models", "top", "--atoms", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 29);
    let (_, text, _) = run(&["models", "top", "--atoms", "2"]);
    assert!(text.starts_with("4 models of top on 2 atoms"));
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["defeq", "top-nei", "--no-such-flag"]).0, 1);
    let (code, _, err) = run(&["defeq", "no-such-pair"]);
    assert_eq!(code, 1);
    assert!(err.contains("no-such-pair"));
    assert_eq!(run(&["apply", "top_to_nei", "{@1"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn computable_verbs() {
    assert_eq!(run(&["computable", "top_to_nei", "--max-atoms", "2"]).0, 0);
    assert_eq!(run(&["computable", "sigma_demo", "--max-atoms", "2"]).0, 3);
}

/// Feeding a reported counterexample back through `apply` reproduces it.
#[test]
fn defeq_counterexample_replays() {
    let (code, v) = run_json(&["defeq", "subset-complement", "--max-atoms", "2"]);
    assert_eq!(code, 2);
    let c = &v["counterexample"];
    let input = c["input"].as_str().unwrap();
    let (t, s) = c["direction"].as_str().unwrap().split_once(" then ").unwrap();
    let (_, image) = run_json(&["apply", t, input]);
    assert_eq!(image["output"], c["image"]);
    let (_, back) = run_json(&["apply", s, image["output"].as_str().unwrap()]);
    assert_eq!(back["output"], c["round_trip"]);
    assert_ne!(back["output"].as_str().unwrap(), input);
}

#[test]
fn target_violation_replays() {
    let mut defs = tempfile::NamedTempFile::new().unwrap();
    writeln!(defs, "interp flat : top -> nei {{ tau_d = D; tau_s = d; }}").unwrap();
    let path = defs.path().to_str().unwrap();
    let (code, v) = run_json(&["--defs", path, "apply", "flat", "{@1} ; {{}, {@1}}"]);
    assert_eq!(code, 2);
    let input = v["counterexample"]["input"].as_str().unwrap().to_string();
    let (again, w) = run_json(&["--defs", path, "apply", "flat", &input]);
    assert_eq!(again, 2);
    assert_eq!(w["counterexample"], v["counterexample"]);
}

#[test]
fn abstract_cantor_bernstein_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"T": ["a0", "a1"], "S": ["b0", "b1"], "t": {{"a0": "b0", "a1": "b1"}}, "s": {{"b0": "a1", "b1": "a0"}}}}"#).unwrap();
    let (code, v) = run_json(&["cb", "--abstract", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let branches: Vec<&str> = v["witnesses"].as_array().unwrap().iter().map(|w| w["branch"].as_str().unwrap()).collect();
    assert_eq!(branches, ["cycle", "cycle"]);
}

#[test]
fn check_theory_reports_counts() {
    let (code, v) = run_json(&["check-theory", "top"]);
    assert_eq!(code, 0);
    assert_eq!(v[0]["model_counts"], serde_json::json!([1, 4, 29]));
    assert_eq!(run(&["check-theory", "top", "--model", "{@1, @2} ; {{}, {@1}}"]).0, 2);
}

#[test]
fn suite_json_is_stable() {
    let bin = env!("CARGO_BIN_EXE_vstar");
    let go = || Command::new(bin).args(["suite", "--json"]).output().unwrap();
    let (a, b) = (go(), go());
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 9);
    assert_eq!(v["passed"], true);
}
