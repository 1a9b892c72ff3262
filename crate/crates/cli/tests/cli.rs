use std::path::PathBuf;
use std::process::Command;

use qfact::models;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_str().unwrap().to_owned()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

/// Exit code, raw stdout and parsed report.
fn qfact(args: &[&str]) -> (i32, String, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_qfact")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let v = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), text, v)
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn certify_burkhardt_exits_not_q_factorial() {
    let (code, _, v) = qfact(&["certify", &data("burkhardt.json")]);
    assert_eq!(code, 10);
    assert_eq!(v["verdict"], "not_q_factorial");
    assert_eq!(v["nodes"], 45);
    assert_eq!(v["defect"]["defect"], 15);
    assert_eq!(v["seed"], 0xB4);
    assert!(v["version"].is_string());
    assert!(!v["hypothesis_log"].as_array().unwrap().is_empty());
}

#[test]
fn reports_are_byte_identical() {
    let args = ["certify", &data("branch_sextic_24.json"), "--seed", "7"];
    let (c1, a, _) = qfact(&args);
    let (c2, b, _) = qfact(&args);
    assert_eq!((c1, c2), (10, 10));
    assert_eq!(a, b);
}

#[test]
fn defect_of_barth_nodes() {
    let (code, _, v) = qfact(&["defect", "--degree", "5", &data("barth-nodes.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["defect"], 13);
    assert_eq!(v["rank"], 52);
    assert_eq!(v["grade"], "numeric");
}

#[test]
fn planar_bese_on_seven_points() {
    let (code, _, v) = qfact(&["planar", "--mode", "bese", "--d", "3", &data("seven-points.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["hypothesis"], true);
    assert_eq!(v["size_bound"], 7);
    let (code, _, v) = qfact(&["planar", "--mode", "separate", "--d", "3", &data("seven-points.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["separators"].as_array().unwrap().len(), 7);
    let (code, _, v) = qfact(&["planar", "--mode", "star", "--m", "2", &data("seven-points.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], false);
}

#[test]
fn degenerate_cone_exits_hypothesis_violated() {
    let (code, _, v) = qfact(&["certify", &data("degenerate_cone_ci_3.json")]);
    assert_eq!(code, 30);
    assert_eq!(v["error"]["kind"], "HypothesisViolated");
}

#[test]
fn errors_are_machine_readable() {
    let (code, _, v) = qfact(&["certify", "/nonexistent/spec.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "InvalidInput");
    let (code, _, v) = qfact(&["certify", "--route", "sideways", "x.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "Usage");
    let (code, _, v) = qfact(&["planar", "--mode", "bese", &data("seven-points.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "InvalidInput");
}

#[test]
fn examples_round_trip_through_certify() {
    let (code, _, v) = qfact(&["examples", "--list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["examples"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, models::NAMES);
    let (code, text, _) = qfact(&["examples", "plane_family_4", "--seed", "3"]);
    assert_eq!(code, 0);
    let file = scratch("plane_family_4.json");
    std::fs::write(&file, text).unwrap();
    let (code, _, v) = qfact(&["certify", path(&file)]);
    assert_eq!(code, 10);
    assert_eq!(v["nodes"], 9);
}

#[test]
fn backend_override_and_text_format() {
    let (code, _, v) = qfact(&["certify", &data("plane_family_3.json"), "--backend", "prime:10007"]);
    assert_eq!(code, 10);
    assert_eq!(v["field"]["p"], 10007);
    let (code, text, _) = qfact(&["nodes", &data("branch_sextic_27.json"), "--format", "text"]);
    assert_eq!(code, 0);
    assert!(text.lines().any(|l| l == "nodes: 27"), "{text}");
}

#[test]
fn separate_general_points_in_p5() {
    let syn = models::synthetic_nodes(5, 10007, 20, 0, 0).unwrap();
    let file = scratch("general20.json");
    std::fs::write(&file, serde_json::to_string(&syn.nodes.to_json()).unwrap()).unwrap();
    let (code, _, v) = qfact(&["separate", path(&file), "--m", "12", "--degree", "16"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["entries"].as_array().unwrap().len(), 20);
    assert!(v.get("failures").map_or(true, |f| f.as_array().unwrap().is_empty()));
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["verified"] == true));
    let (code, _, v) = qfact(&["separate", path(&file), "--m", "12", "--degree", "16", "--index", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["entry"]["node"], 3);
}
