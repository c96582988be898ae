use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curved-nbody"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn classify_parabolic_normal_form() {
    let v = json(&run(&["classify-matrix", "1", "0", "5", "0", "0", "0", "1", "0"]));
    assert_eq!(v["class"], "parabolic");
    assert_eq!(v["fixed_points"], serde_json::json!(["inf"]));
}

#[test]
fn classify_accepts_negative_entries() {
    let v = json(&run(&["classify-matrix", "-2", "0", "0", "0", "0", "0", "-0.5", "0"]));
    assert_eq!(v["class"], "hyperbolic");
}

#[test]
fn family_solve_two_body_parabolic_massless() {
    let v = json(&run(&["family", "solve", "--class", "parabolic", "--shape", "two-body", "--m", "0", "--R", "1"]));
    let roots: Vec<f64> = v["roots"].as_array().unwrap().iter().map(|r| r.as_f64().unwrap()).collect();
    assert_eq!(roots.len(), 2);
    assert!(roots[0].abs() < 1e-12 && (roots[1] - 1.0).abs() < 1e-12, "{roots:?}");
}

#[test]
fn distance_quarter_circle() {
    let v = json(&run(&["distance", "--R", "1", "--z1", "0", "0", "--z2", "0", "1"]));
    let d = v["distance"].as_f64().unwrap();
    assert!((d - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn build_integrate_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let csv = dir.path().join("traj.csv");
    let summary = dir.path().join("summary.json");
    let out = run(&[
        "family", "build", "--class", "elliptic", "--shape", "two-body", "--r", "0.5", "--R", "1", "--output", p(&cfg),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let v = json(&run(&["verify", "--class", "elliptic", "--input", p(&cfg)]));
    assert!(v["max_norm"].as_f64().unwrap() < 1e-12, "{v}");

    let out = run(&[
        "integrate", "--input", p(&cfg), "--t-end", "1", "--samples", "20", "--output", p(&csv), "--summary", p(&summary),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["termination"]["reason"], "completed");
    assert!(s["max_energy_drift"].as_f64().unwrap() < 1e-8);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,z_re0,z_im0,v_re0,v_im0,z_re1,z_im1,v_re1,v_im1,energy");
    assert_eq!(lines.count(), 21);

    let v = json(&run(&["verify-trajectory", "--class", "elliptic", "--input", p(&cfg), "--trajectory", p(&csv)]));
    assert!(v["invariance"]["max_deviation"].as_f64().unwrap() < 1e-8, "{v}");
}

#[test]
fn integrate_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"R": 1.5, "bodies": [
            {"mass": 1.0, "z": [0.3, 0.1], "v": [0.0, 0.2]},
            {"mass": 0.5, "z": [-0.4, 0.2], "v": [0.1, 0.0]},
            {"mass": 0.8, "z": [0.1, -0.6], "v": [-0.1, 0.1]}]}"#,
    )
    .unwrap();
    let a = run(&["integrate", "--input", p(&cfg), "--t-end", "0.5"]);
    let b = run(&["integrate", "--input", p(&cfg), "--t-end", "0.5"]);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn infeasible_family_exits_one() {
    let out = run(&["family", "build", "--class", "hyperbolic", "--shape", "two-body", "--r", "0.5", "--R", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("-0.110592"));
}

#[test]
fn singular_configuration_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"R": 1, "bodies": [{"mass": 1, "z": [0.5, 0]}, {"mass": 1, "z": [-2, 0]}]}"#).unwrap();
    let out = run(&["verify", "--class", "elliptic", "--input", p(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_json_exits_two_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"R": 1, "bodies": [{"mass": 1, "z": [0.5]}]}"#).unwrap();
    let out = run(&["verify", "--class", "elliptic", "--input", p(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bodies[0].z"), "{err}");

    std::fs::write(&cfg, r#"{"R": 1, "bodies": [{"mas": 1, "z": [0.5, 0]}]}"#).unwrap();
    let out = run(&["verify", "--class", "elliptic", "--input", p(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mas"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["distance", "--z1", "0", "0"]).status.code(), Some(2));
    assert_eq!(run(&["integrate", "--input", "/nonexistent/cfg.json", "--t-end", "1"]).status.code(), Some(2));
}

#[test]
fn orbit_sample_elliptic_keeps_modulus() {
    let v = json(&run(&["orbit-sample", "--kind", "elliptic", "--z", "0.5", "0", "--t-end", "3", "--samples", "10"]));
    let samples = v.as_array().unwrap();
    assert_eq!(samples.len(), 11);
    for s in samples {
        let z = &s["z"];
        let (re, im) = (z[0].as_f64().unwrap(), z[1].as_f64().unwrap());
        assert!(((re * re + im * im).sqrt() - 0.5).abs() < 1e-12);
    }
}
