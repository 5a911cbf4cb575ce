use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zforge"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("zforge-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write(dir: &PathBuf, file: &str, body: &str) -> PathBuf {
    let p = dir.join(file);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn list_checkers_prints_registry() {
    let out = bin().arg("list-checkers").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 19);
    assert!(text.lines().any(|l| l.starts_with("purely_discrete_zhang\t")));
}

#[test]
fn body_ops() {
    let d = scratch("body");
    let spec = write(&d, "sq.json", r#"{"family": "cube", "dim": 2, "params": {"edge": [-1, 1]}}"#);
    let run = |op: &str| -> Value {
        let out = bin().args(["body", "--spec", spec.to_str().unwrap(), "--op", op]).output().unwrap();
        assert!(out.status.success(), "{op}");
        serde_json::from_slice(&out.stdout).unwrap()
    };
    assert_eq!(run("volume")["volume"].to_string(), "[4,1]");
    assert_eq!(run("lattice")["lattice_points"].to_string(), "9");
    assert_eq!(run("mu")["mu"].to_string(), "[6,1]");
    assert!(run("steiner").is_object());
}

#[test]
fn verify_writes_reports() {
    let d = scratch("verify");
    let cfg = write(
        &d,
        "cfg.json",
        r#"{"bodies": [{"family": "cube", "dim": 2, "params": {"edge": ["-1", "1"]}}],
            "checkers": ["discrete_zhang_mu", "purely_discrete_zhang"]}"#,
    );
    let out_dir = d.join("out");
    let out = bin()
        .args(["verify", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap(), "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], "zhang-forge/1");
    assert_eq!(report["config"]["params"]["seed"].to_string(), "3");
    assert_eq!(report["summary"]["holds"].to_string(), "2");
    let csv = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(csv.starts_with("id,body,lhs,rhs,slack,verdict\n"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn output_dir_from_environment() {
    let d = scratch("env");
    let cfg = write(&d, "cfg.json", r#"{"bodies": []}"#);
    let out_dir = d.join("from-env");
    let out =
        bin().args(["verify", "--config", cfg.to_str().unwrap()]).env("ZFORGE_OUT_DIR", &out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out_dir.join("report.json").exists());
}

#[test]
fn unknown_checker_exits_64() {
    let d = scratch("unknown");
    let cfg = write(&d, "cfg.json", r#"{"bodies": [], "checkers": ["not_a_checker"]}"#);
    let out = bin().args(["verify", "--config", cfg.to_str().unwrap(), "--out", d.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
    assert!(!d.join("report.json").exists());
}

#[test]
fn sweep_prints_rows() {
    let d = scratch("sweep");
    let cfg = write(
        &d,
        "cfg.json",
        r#"{"sweeps": [{"body": {"family": "cube", "dim": 2}, "targets": ["gn_volume"], "scales": [4, 16]}]}"#,
    );
    let out = bin().args(["sweep", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v[0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["value"].as_f64(), Some(25.0 / 16.0));
}
