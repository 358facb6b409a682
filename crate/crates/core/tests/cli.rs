use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_amalgam-report"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn section<'a>(v: &'a Value, stage: &str) -> &'a Value {
    v["sections"].as_array().unwrap().iter().find(|s| s["stage"] == stage).unwrap()
}

#[test]
fn default_run_passes() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["overall"], "pass");
    let totals: Vec<i64> = serde_json::from_value(section(&v, "e2")["payload"]["gamma0_total_dims"].clone()).unwrap();
    assert_eq!(&totals[..6], &[1, 4, 6, 6, 5, 5]);
}

#[test]
fn single_stage() {
    let out = run(&["--stage", "arithmetic"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let stages: Vec<&str> = v["sections"].as_array().unwrap().iter().map(|s| s["stage"].as_str().unwrap()).collect();
    assert_eq!(stages, vec!["arithmetic"]);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["--q-max", "4"],
        vec!["--stage", "nonsense"],
        vec!["--format", "yaml"],
        vec!["--bogus"],
        vec!["--config", "/nonexistent/amalgam.toml"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
    let bad = scratch("malformed.toml");
    std::fs::write(&bad, "q_max = [").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap()]).status.code(), Some(2));
    let unknown = scratch("unknown_key.toml");
    std::fs::write(&unknown, "colour = 3\n").unwrap();
    assert_eq!(run(&["--config", unknown.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn corrupted_restrictions_fail_e2() {
    let text = bianchi_amalgam::config::DEFAULT_RULES.replace("\"Z4>Z2\" = \"e2=t^2\"", "\"Z4>Z2\" = \"e2=0\"");
    assert_ne!(text, bianchi_amalgam::config::DEFAULT_RULES);
    let cfg = scratch("corrupt.toml");
    std::fs::write(&cfg, text).unwrap();
    let out = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["overall"], "fail");
    assert_eq!(section(&v, "e2")["status"], "fail");
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn corrupted_golden_fails() {
    let golden = bianchi_amalgam::config::DEFAULT_GOLDEN.replace("expected = [1, 0, 1, 4, 3, 1, 2, 4, 3, 1]", "expected = [1, 0, 1, 4, 3, 1, 2, 4, 3, 2]");
    assert_ne!(golden, bianchi_amalgam::config::DEFAULT_GOLDEN);
    std::fs::write(scratch("golden_bad.toml"), golden).unwrap();
    let cfg = scratch("golden_cfg.toml");
    std::fs::write(&cfg, "golden = \"golden_bad.toml\"\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "--stage", "les"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    let (a, b) = (scratch("a.json"), scratch("b.json"));
    for p in [&a, &b] {
        assert_eq!(run(&["--out", p.to_str().unwrap()]).status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (c, d) = (run(&["--format", "markdown"]), run(&["--format", "markdown"]));
    assert_eq!(c.stdout, d.stdout);
    assert!(String::from_utf8_lossy(&c.stdout).contains("overall: **pass**"));
}

#[test]
fn larger_q_max_still_passes() {
    let out = run(&["--q-max", "13", "--stage", "les"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
