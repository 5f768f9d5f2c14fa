//! End-to-end runs of the command-line front end.

use std::fs;
use std::path::Path;

use coherent_risk::cli::run;

fn riskm(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["riskm"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn eval_cvar() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "x.csv", "loss\n1\n2\n3\n4\n");
    let (code, out) = riskm(&["eval", "--risk", r#"{"type":"cvar","alpha":0.5}"#, "--data", &data]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"].as_f64().unwrap() - 3.5).abs() < 1e-12);
}

#[test]
fn eval_risk_from_file_and_weighted_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "x.csv", "value,prob\n0,0.5\n10,0.5\n");
    let risk = write(dir.path(), "r.json", r#"{"type":"mean"}"#);
    let (code, out) = riskm(&["eval", "--risk", &risk, "--data", &data]);
    assert_eq!(code, 0);
    assert!(out.contains("\"value\":5.0"));
}

#[test]
fn gini_and_dominance() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write(dir.path(), "flat.csv", "3\n3\n3\n");
    let a = write(dir.path(), "a.csv", "1\n3\n");
    let b = write(dir.path(), "b.csv", "0\n4\n");
    assert_eq!(riskm(&["gini", "--data", &flat]), (0, "0\n".into()));
    assert_eq!(riskm(&["dominates", "--a", &a, "--b", &b]), (0, "true\n".into()));
    assert_eq!(riskm(&["dominates", "--a", &b, "--b", &a]), (0, "false\n".into()));
}

#[test]
fn curves() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "x.csv", "1\n2\n3\n4\n");
    let (code, out) = riskm(&["curve", "--kind", "cvar", "--data", &data]);
    assert_eq!(code, 0);
    assert!(out.starts_with("alpha,cvar\n"));
    let (code, out) = riskm(&["lorenz", "--data", &data, "--points", "4", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(out.contains("lorenz"));
}

#[test]
fn combine_requires_concavify_when_not_concave() {
    let phi0 = r#"{"type":"proportional_power","p":0.25}"#;
    let phi1 = r#"{"type":"cvar","alpha":0.6666666666666666}"#;
    let max = r#"{"type":"max"}"#;
    let (code, _) = riskm(&["combine", "--phi0", phi0, "--phi1", phi1, "--psi", max]);
    assert_eq!(code, 1);
    let (code, out) = riskm(&["combine", "--phi0", phi0, "--phi1", phi1, "--psi", max, "--concavify"]);
    assert_eq!(code, 0);
    assert!(out.contains("piecewise"));
}

#[test]
fn optimize_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"objective":"quadratic","risk":{"type":"cvar","alpha":0.5},"steps":200,"lr":0.01,"seed":3,
            "data":{"generator":"points","values":[0.0,1.0,10.0]}}"#,
    );
    let run_once = |sub: &str| {
        let out = dir.path().join(sub);
        let (code, _) = riskm(&["optimize", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0);
        fs::read(out.join("params.json")).unwrap()
    };
    assert_eq!(run_once("a"), run_once("b"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "x.csv", "1\n2\n");
    assert_eq!(riskm(&["eval", "--risk", r#"{"type":"cvar","alpha":1.5}"#, "--data", &data]).0, 1);
    assert_eq!(riskm(&["gini", "--data", "/nonexistent/file.csv"]).0, 1);
    assert_eq!(riskm(&["frobnicate"]).0, 1);
    assert_eq!(riskm(&["selftest", "--only", "99"]).0, 1);
    assert_eq!(riskm(&["selftest", "--only", "8"]).0, 3);
    assert_eq!(riskm(&["selftest", "--only", "3"]).0, 0);
}
