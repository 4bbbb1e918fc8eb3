use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fovk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fovk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn toeplitz_certificate_is_lenient_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t");
    let o = fovk(&["certify", "--problem", "toeplitz", "--n", "100", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&out.join("certificate.json"));
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["certificate"]["cond4_pass"], false);
    assert_eq!(doc["certificate"]["origin_excluded"], true);
    assert!(out.join("boundary.csv").exists() && out.join("region.svg").exists());
}

#[test]
fn toeplitz_certificate_fails_strict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t");
    let o = fovk(&["certify", "--problem", "toeplitz", "--n", "20", "--angles", "64", "--strict", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn oseen_upper_certificate_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = fovk(&[
        "certify", "--problem", "oseen", "--grid", "16", "--nu", "1", "--precond", "upper", "--side", "left", "--angles",
        "64", "--strict", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&out.join("certificate.json"));
    assert_eq!(doc["certificate"]["cond4_pass"], true);
    assert!(doc["assumptions"]["lemma_checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn symmetric_synthetic_has_zero_c() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    let o = fovk(&[
        "certify", "--problem", "synthetic", "--n", "20", "--eta", "0", "--precond", "diag", "--angles", "64", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&out.join("certificate.json"))["certificate"]["c"].as_f64().unwrap(), 0.0);
}

#[test]
fn solve_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = fovk(&["solve", "--problem", "synthetic", "--n", "30", "--seed", "7", "--precond", "lower", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        (
            std::fs::read(out.join("trace.csv")).unwrap(),
            std::fs::read(out.join("solve.json")).unwrap(),
        )
    };
    assert_eq!(run("a"), run("b"));
    let trace = std::fs::read_to_string(dir.path().join("a/trace.csv")).unwrap();
    assert!(trace.starts_with("iteration,residual,relative,residual_euclid\n"));
}

#[test]
fn nonconvergence_is_a_failed_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("n");
    let o = fovk(&["solve", "--problem", "oseen", "--grid", "8", "--precond", "diag", "--maxit", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&out.join("solve.json"))["converged"], false);
}

#[test]
fn scalability_single_grid_and_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sc");
    let o = fovk(&["scalability", "--problem", "stokes-darcy", "--nu", "3", "--grids", "8", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_path(out.join("scalability.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    let doc = json(&out.join("scalability.json"));
    assert!(doc["columns"].as_array().unwrap().iter().all(|c| c["spread_l2"] == 0));

    let o = fovk(&["scalability", "--problem", "oseen", "--grids", "16,8", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn oseen_bounds_hold() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    let o = fovk(&[
        "bounds", "--problem", "oseen", "--grid", "8", "--precond", "upper", "--degrees", "16", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&out.join("bounds.json"));
    assert_eq!(doc["bound_holds"], true);
    assert!(doc["worst_excess"].as_f64().unwrap() <= 0.0);
    assert!(out.join("overlay.svg").exists());
}

#[test]
fn generated_system_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    assert_eq!(code(&fovk(&["generate", "--problem", "stokes-darcy", "--grid", "4", "--nu", "3", "--out", g.to_str().unwrap()])), 0);
    let meta = json(&g.join("meta.json"));
    assert_eq!(meta["generator"], "stokes-darcy");
    let s = dir.path().join("s");
    let o = fovk(&["solve", "--problem", "file", "--input", g.to_str().unwrap(), "--out", s.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let o = fovk(&["certify", "--problem", "oseen", "--grid", "64", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    let o = fovk(&["solve", "--problem", "file", "--input", "/nonexistent/dir", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let o = fovk(&["solve", "--problem", "oseen", "--nu", "-1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = fovk(&["certify", "--problem", "nope", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_fovk"))
        .env("FOVK_THREADS", "0")
        .args(["solve", "--problem", "synthetic", "--n", "10", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}
