use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qchev_core::torus::TorusJson;

fn qchev(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchev")).args(args).current_dir(dir).output().expect("binary runs")
}

fn json_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .map(|rd| rd.map(|e| e.unwrap().path()).collect())
        .unwrap_or_default();
    v.retain(|p| p.extension().is_some_and(|e| e == "json") && !p.to_string_lossy().ends_with(".q.json"));
    v.sort();
    v
}

#[test]
fn generate_counts_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qchev(&["generate", "--type", "A1", "--mu", "0", "--mu-max", "4", "--v", "2", "--out", "a"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    // mu = 0 admits no intertwiner; every mu >= 1 admits exactly one.
    let a = json_files(&tmp.path().join("a"));
    assert_eq!(a.len(), 4);
    qchev(&["generate", "--type", "A1", "--mu", "0", "--mu-max", "4", "--v", "2", "--out", "b", "--jobs", "3"], tmp.path());
    for p in &a {
        let q = tmp.path().join("b").join(p.file_name().unwrap());
        assert_eq!(std::fs::read(p).unwrap(), std::fs::read(q).unwrap());
    }
}

#[test]
fn generate_character_and_empty_range() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qchev(&["generate", "--type", "A1", "--mu", "1", "--out", "c"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let files = json_files(&tmp.path().join("c"));
    assert_eq!(files.len(), 1);
    let j: TorusJson = serde_json::from_str(&std::fs::read_to_string(&files[0]).unwrap()).unwrap();
    let ws: Vec<Vec<i64>> = j.terms.iter().map(|t| t.weight.0.clone()).collect();
    assert_eq!(ws, vec![vec![-1], vec![1]]);

    let out = qchev(&["generate", "--type", "A1", "--mu", "3", "--mu-max", "2", "--v", "2", "--out", "e"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(json_files(&tmp.path().join("e")).is_empty());
}

#[test]
fn check_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    qchev(&["generate", "--type", "A2", "--mu", "1,1", "--v", "1,1", "--out", "g"], tmp.path());
    for f in json_files(&tmp.path().join("g")) {
        let out = qchev(&["check", f.to_str().unwrap()], tmp.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let constant = r#"{"cartan":"A1","module_V":{"highest_weight":[2]},"terms":[{"weight":[0],"coeffs":["0","1","0"]}]}"#;
    std::fs::write(tmp.path().join("const.json"), constant).unwrap();
    let out = qchev(&["check", "const.json", "--out", "report.json"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(tmp.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(rep["cond2_dynamical_invariance"]["pass"], false);
    assert!(rep["cond2_dynamical_invariance"]["entries"][0]["witness_lambda"].is_array());

    std::fs::write(tmp.path().join("bad.json"), "{not json").unwrap();
    assert_eq!(qchev(&["check", "bad.json"], tmp.path()).status.code(), Some(2));
    assert_eq!(qchev(&["decompose", "const.json"], tmp.path()).status.code(), Some(1));
}

#[test]
fn decompose_sum_of_generated_traces() {
    let tmp = tempfile::tempdir().unwrap();
    qchev(&["generate", "--type", "A1", "--mu", "2", "--mu-max", "4", "--v", "2", "--out", "g"], tmp.path());
    let files = json_files(&tmp.path().join("g"));
    let parse = |p: &PathBuf| TorusJson::parse(&std::fs::read_to_string(p).unwrap()).unwrap().0;
    let f = parse(&files[0]).scale(&"3".parse().unwrap()).add(&parse(&files[2]).scale(&"5".parse().unwrap()));
    std::fs::write(tmp.path().join("sum.json"), f.to_json_string()).unwrap();
    let out = qchev(&["decompose", "sum.json"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let d: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let terms = d["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["mu"], serde_json::json!([2]));
    assert_eq!(terms[0]["v"], serde_json::json!(["3*q^(0)"]));
    assert_eq!(terms[1]["mu"], serde_json::json!([4]));
    assert_eq!(terms[1]["v"], serde_json::json!(["5*q^(0)"]));

    let zero = r#"{"cartan":"A1","module_V":{"highest_weight":[2]},"terms":[]}"#;
    std::fs::write(tmp.path().join("zero.json"), zero).unwrap();
    let out = qchev(&["decompose", "zero.json"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let d: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(d["terms"].as_array().unwrap().is_empty());
}

#[test]
fn config_file_and_usage_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"cartan_type":"A1","mu":[1],"mu_max":[2],"V":[2],"output_path":"cfg","seed":0}"#;
    std::fs::write(tmp.path().join("job.json"), cfg).unwrap();
    assert_eq!(qchev(&["generate", "--config", "job.json"], tmp.path()).status.code(), Some(0));
    assert_eq!(json_files(&tmp.path().join("cfg")).len(), 2);

    std::fs::write(tmp.path().join("typo.json"), r#"{"cartan":"A1"}"#).unwrap();
    assert_eq!(qchev(&["generate", "--config", "typo.json"], tmp.path()).status.code(), Some(2));
    assert_eq!(qchev(&["generate", "--type", "Q7"], tmp.path()).status.code(), Some(2));
    assert_eq!(qchev(&["generate", "--type", "A1", "--v", "-2"], tmp.path()).status.code(), Some(2));
    assert_eq!(qchev(&["frobnicate"], tmp.path()).status.code(), Some(2));
}

#[test]
fn verify_suite_writes_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qchev(&["verify-suite", "--suite", "golden", "--suite", "verma-series", "--out", "s"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(tmp.path().join("s/suite_summary.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("suite,case,pass,ms"));
    assert_eq!(lines.count(), 6 + 10);
    assert!(!csv.contains(",false,"));
    assert_eq!(qchev(&["verify-suite", "--suite", "nope"], tmp.path()).status.code(), Some(2));
}
