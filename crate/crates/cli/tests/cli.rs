//! End-to-end checks of the command surface: exit codes, CSV shapes, config
//! precedence.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn rugged() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rugged"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rugged-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn bounds_table_rows_and_values() {
    let dir = tmp_dir("bounds");
    let status = rugged()
        .args(["bounds-table", "--lambda", "1,4", "--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(dir.join("bounds-table/results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "lambda,m_lambda,smaller_root,larger_root,threshold,tau,identity_residual_max"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let m1: f64 = row[1].parse().unwrap();
    assert!((m1 - 0.0632497).abs() < 1e-6);
    let threshold: f64 = row[4].parse().unwrap();
    assert_eq!(threshold, 0.5);
    // Echo and summary exist.
    assert!(dir.join("bounds-table/config.json").is_file());
    assert!(dir.join("bounds-table/summary.json").is_file());
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_suites_pass_and_produce_summary() {
    let dir = tmp_dir("verify");
    let config = dir.join("cfg.json");
    fs::write(
        &config,
        r#"{"samples": 60, "head_dim": 10, "lambdas": [0.5, 2.0]}"#,
    )
    .unwrap();
    for suite in ["rugged", "skew", "bounds"] {
        let out = rugged()
            .args(["verify", "--suite", suite, "--config"])
            .arg(&config)
            .args(["--out"])
            .arg(&dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "suite {suite}: {out:?}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("verify/summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["passed"], serde_json::Value::Bool(true));
    assert!(summary["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| { c["residual"].is_number() && c["passed"].as_bool().unwrap() }));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_2() {
    let dir = tmp_dir("usage");
    let code = |out: std::process::Output| out.status.code().unwrap();

    let out = rugged()
        .args(["verify", "--suite", "bogus", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(code(out), 2);

    let out = rugged()
        .args(["explore", "--op", "bogus", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(code(out), 2);

    let bad = dir.join("bad.json");
    fs::write(&bad, r#"{"no_such_key": true}"#).unwrap();
    let out = rugged()
        .args(["bounds-table", "--config"])
        .arg(&bad)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(code(out), 2);

    let out = rugged().args(["bogus-subcommand"]).output().unwrap();
    assert_eq!(code(out), 2);

    // Infeasible explore parameters.
    let out = rugged()
        .args(["explore", "--lambda", "0", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(code(out), 2);

    let out = rugged()
        .args(["explore", "--head-dim", "0", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(code(out), 2);

    fs::remove_dir_all(&dir).ok();
}

#[test]
fn empty_lambda_grid_gives_header_only_csv() {
    let dir = tmp_dir("empty");
    let config = dir.join("cfg.json");
    fs::write(&config, r#"{"lambdas": []}"#).unwrap();
    let status = rugged()
        .args(["bounds-table", "--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(dir.join("bounds-table/results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn env_var_sets_default_output_directory() {
    let dir = tmp_dir("envout");
    let status = rugged()
        .args(["bounds-table", "--lambda", "1"])
        .env("RUGGED_OUT", &dir)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.join("bounds-table/results.csv").is_file());
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn flags_override_config_file() {
    let dir = tmp_dir("precedence");
    let config = dir.join("cfg.json");
    fs::write(&config, r#"{"lambdas": [9.0], "seed": 5}"#).unwrap();
    let status = rugged()
        .args(["bounds-table", "--lambda", "1", "--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let echo: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("bounds-table/config.json")).unwrap())
            .unwrap();
    assert_eq!(echo["lambdas"], serde_json::json!([1.0]));
    assert_eq!(echo["seed"], serde_json::json!(5));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn explore_gossez_certifies_at_lambda_4() {
    let dir = tmp_dir("explore4");
    let status = rugged()
        .args([
            "explore",
            "--op",
            "gossez",
            "--lambda",
            "4",
            "--head-dim",
            "8",
            "--restarts",
            "4",
            "--budget",
            "20",
            "--out",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(dir.join("explore/results.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.ends_with(",true"), "row: {row}");
    let witnesses = fs::read_to_string(dir.join("explore/witnesses.json")).unwrap();
    assert!(witnesses.contains("\"certified\": true"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn explore_fp_grid_certifies_with_slack_column() {
    let dir = tmp_dir("explorefp");
    let status = rugged()
        .args([
            "explore",
            "--op",
            "fp-grid",
            "--lambda",
            "2",
            "--head-dim",
            "128",
            "--restarts",
            "2",
            "--budget",
            "4",
            "--out",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(dir.join("explore/results.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let slack_col = header.iter().position(|h| *h == "model_slack").unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let slack: f64 = row[slack_col].parse().unwrap();
    assert!(slack > 0.0, "grid rows carry a positive slack");
    assert_eq!(row.last().copied(), Some("true"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn rugged_check_both_presets() {
    let dir = tmp_dir("rugged");
    for (preset, k) in [("l1", "2"), ("l1-grid", "129")] {
        let status = rugged()
            .args(["rugged-check", "--preset", preset, "--head-dim", k, "--out"])
            .arg(&dir)
            .status()
            .unwrap();
        assert!(status.success(), "preset {preset}");
        let csv = fs::read_to_string(dir.join("rugged-check/results.csv")).unwrap();
        assert!(csv.lines().nth(1).unwrap().ends_with(",true"));
    }
    fs::remove_dir_all(&dir).ok();
}
