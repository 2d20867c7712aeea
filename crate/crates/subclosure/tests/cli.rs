use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subclosure"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, v: Value) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_string_lossy().into_owned()
}

fn lines(dir: &Path) -> (String, String) {
    let h = 0.5f64.sqrt();
    let a = write(dir, "a.json", json!({"ambient_dim": 2, "vectors": [[h, h]]}));
    let b = write(dir, "b.json", json!({"ambient_dim": 2, "vectors": [[1.0, 0.0]]}));
    (a, b)
}

#[test]
fn pair_at_45_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = lines(dir.path());
    let out = run(&["pair", "--a", &a, "--b", &b]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["command"], "pair");
    let angle = v["values"]["friedrichs_angle"].as_f64().unwrap();
    assert!((angle - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    assert_eq!(v["provenance"]["seed"], 0);
}

#[test]
fn missing_file_exits_with_io_code() {
    let out = run(&["pair", "--a", "/nonexistent/a.json", "--b", "/nonexistent/b.json"]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["exit_code"], 3);
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_json_exits_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{not json").unwrap();
    let p = p.to_string_lossy();
    let out = run(&["pair", "--a", &p, "--b", &p]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_family_is_a_precondition_failure() {
    let out = run(&["blocks", "--family", "no_such_family"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "unknown_family");
}

#[test]
fn bad_flag_and_version() {
    assert_eq!(run(&["pair", "--bogus"]).status.code(), Some(3));
    let v = run(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn one_over_k_block_gap_vanishes() {
    let out = run(&["blocks", "--family", "one_over_k", "--n", "3", "--horizon", "100", "--subset", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["artifacts"]["verdicts"][0]["status"], "gap_vanishing");
}

#[test]
fn output_file_matches_stdout_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = lines(dir.path());
    let target = dir.path().join("report.json");
    let t = target.to_string_lossy().into_owned();
    let first = run(&["pair", "--a", &a, "--b", &b]);
    let second = run(&["pair", "--a", &a, "--b", &b, "--out", &t]);
    assert_eq!(second.status.code(), Some(0));
    assert!(second.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), first.stdout);
}

#[test]
fn system_margins_have_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(
        dir.path(),
        "system.json",
        json!({"ambient_dim": 3, "members": [
            {"ambient_dim": 3, "vectors": [[1.0, 0.0, 0.0]]},
            {"ambient_dim": 3, "vectors": [[0.0, 1.0, 0.0]]},
            {"ambient_dim": 3, "vectors": [[0.0, 0.0, 1.0]]}
        ]}),
    );
    let out = run(&["system", "--system", &sys]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let margins = v["margins"].as_array().unwrap();
    assert!(!margins.is_empty());
    assert!(margins.iter().all(|m| m["verdict"].is_string() && m["id"].is_string()));
}
