use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_meandist"));
    c.env_remove("MEANDIST_THREADS");
    c
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn keys(v: &Value) -> Vec<String> {
    let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    k.sort();
    k
}

#[test]
fn exact_disc_prints_twelve_digits() {
    let dir = tempfile::tempdir().unwrap();
    let disc = write(dir.path(), "disc.json", r#"{"kind":"ball","center":[0,0],"radius":1}"#);
    let o = run(&["delta", "--body", disc.to_str().unwrap(), "--method", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().ends_with("0.905414787367"), "{text}");
    assert!(text.contains("target"));
}

#[test]
fn delta_json_schema_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", r#"{"kind":"box","lower":[0,0],"upper":[1,1]}"#);
    let o = run(&["delta", "--body", sq.to_str().unwrap(), "--samples", "20000", "--threads", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(keys(&v), ["config", "method", "n", "seed", "std_error", "value"]);
    assert_eq!(v["n"], 20000);
    assert_eq!(v["method"], "mc");
    assert_eq!(v["config"]["threads"], 3);
    assert_eq!(v["config"]["samples"], 20000);
    let value = v["value"].as_f64().unwrap();
    let se = v["std_error"].as_f64().unwrap();
    assert!((value - 0.5214054331647207).abs() < 4.0 * se);
}

#[test]
fn runs_are_reproducible_and_env_overrides_threads() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "t.json", r#"{"kind":"k_delta","d":2,"delta":0.5}"#);
    let args = ["delta", "--body", tri.to_str().unwrap(), "--samples", "10000", "--threads", "2", "--json"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let o = bin().args(args).env("MEANDIST_THREADS", "5").output().unwrap();
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["config"]["threads"], 5);
}

#[test]
fn ratio_of_the_disc() {
    let dir = tempfile::tempdir().unwrap();
    let disc = write(dir.path(), "disc.json", r#"{"kind":"ball","center":[0,0],"radius":1}"#);
    let o = run(&["ratio", "--body", disc.to_str().unwrap(), "--samples", "200000", "--dirs", "720", "--grid", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(keys(&v), ["config", "delta", "lower", "std_error", "upper", "v1", "value"]);
    let r = v["value"].as_f64().unwrap();
    let se = v["std_error"].as_f64().unwrap();
    let want = 128.0 / (45.0 * std::f64::consts::PI.powi(2));
    assert!((r - want).abs() < 4.0 * se, "{r} vs {want}");
}

#[test]
fn v1_and_sylvester_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let hex = write(dir.path(), "h.json", r#"{"kind":"regular_polygon","n_sides":6,"circumradius":1}"#);
    let o = run(&["v1", "--body", hex.to_str().unwrap(), "--dirs", "7200", "--grid", "--json"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 3.0).abs() < 1e-6);
    let o = run(&["sylvester", "--body", hex.to_str().unwrap(), "--samples", "20000", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("value,std_error,n,method,seed\n"));
    let ball = write(dir.path(), "b.json", r#"{"kind":"ball","center":[0,0,0],"radius":1}"#);
    let o = run(&["sylvester", "--body", ball.to_str().unwrap(), "--samples", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn profile_ops() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", r#"{"kind":"box","lower":[0,0],"upper":[1,1]}"#);
    let o = run(&["profile", "--body", sq.to_str().unwrap(), "--direction", "1,0", "--op", "I", "--knots", "9", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(keys(&v), ["config", "op", "profile", "value"]);
    assert!((v["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-11);

    let ramp = write(dir.path(), "ramp.json", r#"{"d":2,"knots":[-1,1],"f":[0,1]}"#);
    let o = run(&["profile", "--profile", ramp.to_str().unwrap(), "--op", "rearrange", "--json"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 7.0 / 30.0).abs() < 1e-11);
    assert_eq!(v["profile"]["knots"], serde_json::json!([-1.0, 0.0, 1.0]));

    let o = run(&["profile", "--body", sq.to_str().unwrap(), "--direction", "1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn optimize_min_reaches_the_tent() {
    let o = run(&["optimize-I", "--d", "2", "--mode", "min", "--knots", "9", "--iters", "3000", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(keys(&v), ["accepted_moves", "config", "iterations", "mode", "profile", "target", "value"]);
    assert!((v["value"].as_f64().unwrap() - 7.0 / 30.0).abs() < 1e-3);
}

#[test]
fn verify_profiles_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.csv");
    let o = run(&["verify", "--suite", "profiles", "--d", "2", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let csv = std::fs::read_to_string(&report).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "suite,d,delta,quantity,estimate,std_error,target,pass");
    assert!(lines.all(|l| l.starts_with("profiles,2,,") && l.ends_with(",true")));
}

#[test]
fn verify_reports_failure_with_exit_one() {
    let o = run(&["verify", "--suite", "profiles", "--d", "3", "--iters", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("FAIL profiles d=3 optimize_max"));
    assert!(text.contains("PASS profiles d=3 I_h0"));
    assert!(text.trim_end().ends_with("12 checks, 2 failed"));
}

#[test]
fn input_errors_exit_two_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"kind":"box","lower":[0,0],"upper":[0,1]}"#);
    let o = run(&["delta", "--body", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate box"));
    let o = run(&["delta", "--body", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["delta", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin().args(["verify", "--suite", "profiles", "--d", "2"]).env("MEANDIST_THREADS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
