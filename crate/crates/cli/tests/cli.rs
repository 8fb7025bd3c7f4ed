use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hardedge::io::from_csv;
use serde_json::Value;

fn hardedge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardedge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn ratefn_table() {
    let o = hardedge(&["ratefn", "--rho-min", "0", "--rho-max", "2", "--steps", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let (cfg, t) = from_csv(&stdout(&o)).unwrap();
    assert_eq!(cfg["command"], "ratefn");
    assert_eq!(t.rows.len(), 5);
    let col = t.columns.iter().position(|c| c == "i_bess").unwrap();
    match &t.rows[0][col] {
        hardedge::harness::Cell::Real(x) => assert!((x - 0.5).abs() < 1e-6),
        other => panic!("{other:?}"),
    }
}

#[test]
fn empty_grid_gives_header_only() {
    let o = hardedge(&["ratefn", "--steps", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["rho,nu,ellip_k,ellip_e,script_h,gamma,i_bess"]);
}

#[test]
fn zero_lambda_samples() {
    let o = hardedge(&["sample", "--beta", "2", "--a", "0", "--lambda", "0", "--samples", "10", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, t) = from_csv(&stdout(&o)).unwrap();
    assert_eq!(t.rows.len(), 10);
    assert!(t.rows.iter().all(|r| r[1] == hardedge::harness::Cell::Int(0)));
}

#[test]
fn usage_and_domain_errors_exit_2() {
    for args in [
        vec!["clt", "--bogus"],
        vec!["sample", "--beta", "0"],
        vec!["sample", "--beta", "-1"],
        vec!["sample", "--a", "-1"],
        vec!["sample", "--a", "-2.5"],
        vec!["sample", "--lambda", "-1"],
        vec!["sample", "--samples", "many"],
        vec!["nosuchcommand"],
    ] {
        let o = hardedge(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn unwritable_output_exits_2() {
    let o = hardedge(&["ratefn", "--steps", "2", "--output", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_verdict_exits_1() {
    // a 1 x 1 matrix is far outside the hard-edge regime
    let o = hardedge(&["oracle-compare", "--lambda", "3", "--n-matrix", "1", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_sits_beneath_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# sample settings\nlambda = 0\nsamples = 4\nseed = 3\n").unwrap();
    let o = hardedge(&["sample", "--config", cfg.to_str().unwrap(), "--samples", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let (pairs, t) = from_csv(&stdout(&o)).unwrap();
    assert_eq!(t.rows.len(), 6);
    assert_eq!(pairs["seed"], "3");
    fs::write(&cfg, "lambda=0\nsamlpes=4\n").unwrap();
    assert_eq!(hardedge(&["sample", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

fn replay_matches(path: &Path, dir: &Path) {
    let again = dir.join("again");
    let o = hardedge(&["replay", path.to_str().unwrap(), "--output", again.to_str().unwrap()]);
    assert!(o.status.code().is_some_and(|c| c <= 1));
    assert_eq!(fs::read(path).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn outputs_replay_from_their_embedded_config() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("osc.csv");
    let json = dir.path().join("cmp.json");
    let o = hardedge(&[
        "osc", "--lambdas", "10,100", "--samples", "20", "--seed", "4", "--output", csv.to_str().unwrap(),
    ]);
    assert!(o.status.code().is_some_and(|c| c <= 1));
    replay_matches(&csv, dir.path());
    let o = hardedge(&[
        "oracle-compare", "--lambda", "1.5", "--samples", "60", "--n-matrix", "100", "--format", "json",
        "--output", json.to_str().unwrap(),
    ]);
    assert!(o.status.code().is_some_and(|c| c <= 1));
    replay_matches(&json, dir.path());
}

#[test]
fn ldp_json_reports_the_minimum() {
    let o = hardedge(&["ldp", "--steps", "9", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["config", "results", "verdict", "version"]);
    assert_eq!(v["version"], "hardedge/1");
    let rho = v["results"]["minimum"]["rho"].as_f64().unwrap();
    assert!((rho - 2.0 / std::f64::consts::PI).abs() < 1e-6);
    // re-serialize and re-parse
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hardedge"))
            .args(["clt", "--lambdas", "20,30", "--samples", "500", "--seed", "1"])
            .env("HARDEDGE_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("1"));
    assert_eq!(one, run("3"));
}

#[test]
fn help_exits_0() {
    assert_eq!(hardedge(&["--help"]).status.code(), Some(0));
    assert_eq!(hardedge(&["clt", "--help"]).status.code(), Some(0));
}
