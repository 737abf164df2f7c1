//! The `attrition` binary end to end.

use std::process::{Command, Output};

fn attrition(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attrition"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn table(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn static_solve_layout() {
    let out = attrition(&["static-solve", "--prize", "power", "--alpha", "1", "--n", "50"]);
    assert!(out.status.success());
    let rows = table(&out);
    assert_eq!(rows[0], ["t", "G", "g", "Q"]);
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows.len(), 102);
}

#[test]
fn dynamic_moments_follow_square_root() {
    let out = attrition(&["dynamic-moments", "--prize", "power", "--alpha", "2", "--n", "200", "--grid", "0:1:200"]);
    assert!(out.status.success());
    let rows = table(&out);
    assert_eq!(&rows[0][..3], ["t", "E_X", "Var_X"]);
    assert_eq!(rows[0].len(), 3 + 200);
    for row in &rows[1..] {
        let t: f64 = row[0].parse().unwrap();
        let ex: f64 = row[1].parse().unwrap();
        if t <= 0.9 {
            assert!((ex - t.sqrt()).abs() < 0.05);
        }
    }
}

#[test]
fn invasion_sweep_layout() {
    let out = attrition(&["invasion-sweep", "--alpha", "0.5:1.5:0.1", "--n", "4:35"]);
    assert!(out.status.success());
    let rows = table(&out);
    assert_eq!(rows[0], ["N", "alpha", "delta", "A_N", "C_N", "method"]);
    assert_eq!(rows.len(), 1 + 11 * 32);
    // sorted by alpha, then N
    let keys: Vec<(f64, usize)> = rows[1..]
        .iter()
        .map(|r| (r[1].parse().unwrap(), r[0].parse().unwrap()))
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"prize": {"kind": "power", "alpha": 2.0}, "n": [5, 6], "format": "json"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = attrition(&["dynamic-duration", "--config", cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][0][1], 2.0);

    let out = attrition(&["dynamic-duration", "--config", cfg, "--alpha", "0.5", "--format", "csv"]);
    let rows = table(&out);
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), 0.5);
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let out = attrition(&["q-functional", "--alpha", "2", "--n", "10", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("N,alpha,convexity,Q_0,Q_min,argmin,Q_end\n10,"));
}

#[test]
fn exit_codes() {
    assert_eq!(attrition(&[]).status.code(), Some(2));
    assert_eq!(attrition(&["static-solve", "--n", "1"]).status.code(), Some(2));
    assert_eq!(attrition(&["static-solve", "--prize", "polynomial"]).status.code(), Some(2));
    assert_eq!(attrition(&["theorem2", "--q", "1.5"]).status.code(), Some(2));
    assert_eq!(attrition(&["dynamic-moments", "--config", "/no/such/file.json"]).status.code(), Some(2));
    let bad = attrition(&["invasion-sweep", "--tail-tol", "0.5", "--n", "8", "--alpha", "1"]);
    assert_eq!(bad.status.code(), Some(3), "{}", String::from_utf8_lossy(&bad.stderr));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn every_subcommand_has_a_dry_run() {
    for cmd in [
        "dynamic-moments", "dynamic-matrix", "dynamic-duration", "static-solve", "q-functional",
        "invasion-sweep", "meanfield", "perturbation", "simulate-dynamic", "simulate-static",
        "theorem2", "rate-fit",
    ] {
        let out = attrition(&[cmd, "--dry-run"]);
        assert!(out.status.success(), "{cmd}");
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["plan"]["command"], cmd);
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["simulate-static", "--alpha", "0.5", "--n", "5", "--replicates", "2000", "--seed", "42"];
    let a = attrition(&args);
    let b = attrition(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("# seed=42\n"));
}
