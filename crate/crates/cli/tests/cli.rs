use std::io::Write;
use std::process::{Command, Output, Stdio};

use num_rational::BigRational;
use ophh_core::{builtin_assoc, serialize_operad, ComposeKey};
use serde_json::Value;

fn ophh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ophh")).args(args).output().expect("binary runs")
}

fn ophh_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ophh"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

/// The associative operad with `a2 ∘_1 a2` sent to `-a3`.
fn broken_assoc() -> String {
    let mut spec = builtin_assoc(4).unwrap();
    let key = ComposeKey { x_arity: 2, x: 0, slot: 1, y_arity: 2, y: 0 };
    spec.set_composition(key, vec![(0, -BigRational::from_integer(1.into()))]).unwrap();
    serialize_operad(&spec)
}

#[test]
fn validate_builtin_passes() {
    let o = ophh(&["validate", "--builtin", "assoc", "--cap", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[PASS] sequential associativity"));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn validate_reports_a_witness_for_a_broken_file() {
    let f = write_temp(&broken_assoc());
    let o = ophh(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"), "{}", stdout(&o));
    assert!(stderr(&o).contains("first failing check:"));

    let o = ophh(&["validate", f.path().to_str().unwrap(), "--format", "json"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let witnesses = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["readings"].as_array().unwrap())
        .flat_map(|r| r["witnesses"].as_array().unwrap())
        .count();
    assert!(witnesses > 0);
}

#[test]
fn malformed_input_exits_with_two() {
    let f = write_temp("this is not an operad\n");
    let o = ophh(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));

    assert_eq!(ophh(&["validate"]).status.code(), Some(2));
    assert_eq!(ophh(&["validate", f.path().to_str().unwrap(), "--builtin", "assoc"]).status.code(), Some(2));
    assert_eq!(ophh(&["validate", "/nonexistent/operad.toml"]).status.code(), Some(2));
    assert_eq!(ophh(&["validate", "--builtin", "frobenius:nope"]).status.code(), Some(2));
    assert_eq!(ophh(&["eval", "a2 +", "--builtin", "assoc"]).status.code(), Some(2));
}

#[test]
fn reads_operads_from_stdin() {
    let text = serialize_operad(&builtin_assoc(5).unwrap());
    let o = ophh_stdin(&["homology", "-", "--ring", "Q"], &text);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("Hochschild homology of assoc"));
    assert!(out.contains("all other bidegrees vanish"));
}

#[test]
fn homology_json_is_deterministic() {
    let args = ["homology", "--builtin", "frobenius:dual1", "--cap", "4", "--format", "json"];
    let (a, b) = (ophh(&args), ophh(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    let nonzero: Vec<(u64, i64)> = doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["betti"].as_u64().unwrap() > 0)
        .map(|e| (e["arity"].as_u64().unwrap(), e["grading"].as_i64().unwrap()))
        .collect();
    assert_eq!(nonzero, [(0, 0), (0, 1), (1, -1), (1, 0), (2, -2), (2, -1), (3, -3), (3, -2)]);
}

#[test]
fn homology_prints_representatives() {
    let o = ophh(&["homology", "--builtin", "assoc", "--cap", "6", "--reps"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rep: a0"), "{}", stdout(&o));
}

#[test]
fn bvcheck_passes_on_builtins() {
    let o = ophh(&["bvcheck", "--builtin", "frobenius:dual1", "--cap", "4", "--samples", "40", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("BV relation"));
    assert!(out.contains("B anticommutes with the differential"));
}

#[test]
fn bvcheck_names_the_first_failure() {
    let f = write_temp(&broken_assoc());
    let o = ophh(&["bvcheck", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("first failing check: sequential associativity"), "{}", stderr(&o));
}

#[test]
fn eval_is_exact() {
    let o = ophh(&["eval", "bracket(a2, a1) + 1/2*del(a1)", "--builtin", "assoc"]);
    assert_eq!(stdout(&o), "3/2*a2\narity 2, grading 0\n");
    let o = ophh(&["eval", "B(a3)", "--builtin", "assoc", "--format", "json"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["value"], "6*a2");
    assert_eq!(doc["arity"], 2);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = ophh(&["validate", "--builtin", "assoc", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["subject"], "assoc");
}

#[test]
fn truncation_is_reported_with_a_hint() {
    let text = serialize_operad(&builtin_assoc(4).unwrap());
    let o = ophh_stdin(&["homology", "-", "--cap", "9"], &text);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("hint:"));
}

#[test]
fn bv_tables_validate_and_evaluate_quoted_names() {
    let o = ophh(&["validate", "--builtin", "bv-lowarity"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = ophh(&["eval", "bracket(`Dx1`, mu)", "--builtin", "bv-lowarity"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "[x1,x2]\narity 2, grading 1\n");
    let o = ophh(&["validate", "--builtin", "bv-lowarity", "--cap", "4"]);
    assert_eq!(o.status.code(), Some(1));
}
