use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dmvlab::experiments::emit::{CLAUSES_HEADER, RUNS_HEADER, THERMO_HEADER, WEAKSTRONG_HEADER};

fn dmvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmvlab")).args(args).env_remove("DMVLAB_WORKERS").output().unwrap()
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(name)
}

fn first_line(path: PathBuf) -> String {
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display())).lines().next().unwrap().to_string()
}

#[test]
fn thermo_audit_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dmvlab(&["thermo-audit", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(first_line(dir.path().join("thermo_audit.csv")), THERMO_HEADER);
}

#[test]
fn releng_audit_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dmvlab(&["releng-audit", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
}

#[test]
fn sweep_then_dmv_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cfg = config("tests/golden/config.toml");
    let cfg = cfg.to_str().unwrap();
    let out = dmvlab(&["sweep", "--config", cfg, "--out", d, "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(first_line(dir.path().join("runs.csv")), RUNS_HEADER);
    assert_eq!(first_line(dir.path().join("clauses.csv")), CLAUSES_HEADER);
    let out = dmvlab(&["dmv-verify", "--config", cfg, "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("dmv_verify.ndjson").exists());
}

#[test]
fn workers_env_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("tests/golden/config.toml");
    let out = Command::new(env!("CARGO_BIN_EXE_dmvlab"))
        .args(["nsf-run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()])
        .env("DMVLAB_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(first_line(dir.path().join("runs.csv")), RUNS_HEADER);
    assert!(dir.path().join("snapshots_2.csv").exists());
}

#[test]
fn weakstrong_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("tests/golden/config.toml");
    let out = dmvlab(&["weakstrong", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(first_line(dir.path().join("weakstrong.csv")), WEAKSTRONG_HEADER);
}

#[test]
fn errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(dmvlab(&["sweep"]).status.code(), Some(2));
    assert_eq!(dmvlab(&["sweep", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    let out = dmvlab(&["dmv-verify", "--config", config("tests/golden/config.toml").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("run `sweep` first"));
}

#[test]
fn regime_violations_need_the_override_flag() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("tests/golden/config.toml")).unwrap().replace("theta_bar = 0.9", "theta_bar = 0.9\nalpha = 1.5");
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let d = dir.path().join("o");
    assert_eq!(dmvlab(&["nsf-run", "--config", p, "--out", d.to_str().unwrap()]).status.code(), Some(2));
    let out = dmvlab(&["nsf-run", "--config", p, "--out", d.to_str().unwrap(), "--override-regime"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
