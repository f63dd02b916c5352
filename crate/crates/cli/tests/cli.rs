use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SPIRAL: &str = r#"{"n": 3, "start_side": "N", "order": [3, 2, 1],
  "weights": {"e1N": "1/8", "e0N": "1/8", "rootW": "1/4", "e2S": "1/8", "e1S": "1/8", "rootB": "1/4"}}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diameters")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn plan_prints_certificate() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "spiral3.json", SPIRAL);
    let out = run(&["plan", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "COST 1/4 BOUND 11/8 OK");
}

#[test]
fn plan_file_is_written_and_input_untouched() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "spiral3.json", SPIRAL);
    let plan = dir.path().join("plan.json");
    let out = run(&["plan", "--input", &input, "--output", plan.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&plan).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["total_cost"], "1/4");
    assert_eq!(fs::read_to_string(&input).unwrap(), SPIRAL);
}

#[test]
fn klower_grid() {
    let out = run(&["klower", "--grid", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "A*=0.5 K*=0.0625");
}

#[test]
fn crossing_arcs_fail_validation() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.json", r#"{"n": 2, "start_side": "N", "order": [2, 1]}"#);
    let out = run(&["validate", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("interleave"), "{}", stdout(&out));

    let good = write(&dir, "good.json", SPIRAL);
    assert_eq!(run(&["validate", "--input", &good]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["plan", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["klower", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn graph_dot_and_json() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "spiral3.json", SPIRAL);
    let dot = run(&["graph", "--input", &input, "--format", "dot"]);
    assert!(stdout(&dot).starts_with("graph G {"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&["graph", "--input", &input]))).unwrap();
    assert_eq!(json["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(json["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn enumerate_is_deterministic() {
    let a = run(&["enumerate", "--n", "4"]);
    let b = run(&["enumerate", "--n", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let list: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(list.as_array().unwrap().len(), 6);
}

#[test]
fn rotate_then_plan() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("meander.json");
    let r = run(&["rotate", "--t", "2.3", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(Path::new(&out).exists());
    let p = run(&["plan", "--input", out.to_str().unwrap()]);
    assert_eq!(p.status.code(), Some(0));
    let line = stdout(&p);
    assert!(line.starts_with("COST ") && line.trim().ends_with("BOUND 13/8 OK"), "{line}");
}

#[test]
fn reeb_table_and_dot() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("tree.dot");
    let out = run(&["reeb", "--rings", "40", "--a", "0.5,0.75", "--tol", "0.01", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().contains("Cal_A"));
    assert_eq!(text.lines().filter(|l| l.contains("err=")).count(), 2);
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph contour {"));
}

#[test]
fn reeb_reads_a_field_file() {
    let dir = TempDir::new().unwrap();
    // a square fan with a single interior peak
    let field = "vertices 5\n0 0 1\n1 0 0\n0 1 0\n-1 0 0\n0 -1 0\ntriangles 4\n0 1 2\n0 2 3\n0 3 4\n0 4 1\n";
    let input = write(&dir, "peak.txt", field);
    let out = run(&["reeb", "--input", &input, "--a", "0.5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("a,cal,cal_a,r_a,lower_rate,root_fallback\n"));
}

#[test]
fn sandwich_csv() {
    let out = run(&["sandwich", "--t-min", "2", "--t-max", "8", "--step", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("t,n,upper_cost,lower_rate,lower_line\n"));
    assert_eq!(text.lines().count(), 8);
    assert!(!text.contains('\r'));
}

#[test]
fn invariants_report() {
    let out = run(&["invariants", "--max-n", "4", "--seeds", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema"], "invariants/1");
    assert_eq!(doc["all_pass"], true);
    assert_eq!(run(&["invariants", "--max-n", "11"]).status.code(), Some(1));
}
