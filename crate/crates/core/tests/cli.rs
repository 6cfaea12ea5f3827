use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tfloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfloc")).args(args).output().expect("binary runs")
}

fn summary(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("json summary");
    assert_eq!(v["schema"], 1);
    v
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn hs_ball_uses_radial_route() {
    let v = summary(&tfloc(&["hs", "--ball", "1", "--d", "1"]));
    assert_eq!(v["method"], "radial_bessel");
    assert!((v["hs_sq"].as_f64().unwrap() - 2.1621542366).abs() < 1e-9);
}

#[test]
fn hs_region_file_uses_grid_route() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "disc.rgn");
    summary(&tfloc(&["region", "--ball", "1", "--h", "0.05", "--out", &file]));
    let v = summary(&tfloc(&["hs", "--region", &file, "--stencil", "cell-average"]));
    assert_eq!(v["method"], "grid_convolution");
    assert!((v["hs_sq"].as_f64().unwrap() - 2.162).abs() < 0.03);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(tfloc(&["hs", "--region", "/nonexistent/none.rgn"]).status.code(), Some(2));
    assert_eq!(tfloc(&["sweep", "--family", "bogus"]).status.code(), Some(2));
    assert_eq!(tfloc(&["hs", "--ball", "-1"]).status.code(), Some(2));
    assert_eq!(tfloc(&["stft", "--lieb", "9"]).status.code(), Some(2));
    let out = tfloc(&["hs", "--ball", "1", "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn degenerate_fit_exits_4() {
    assert_eq!(tfloc(&["sweep", "--family", "eps", "--eps", "0.1,0.2"]).status.code(), Some(4));
    assert_eq!(tfloc(&["sweep", "--family", "dumbbell", "--r", "2,3"]).status.code(), Some(4));
}

#[test]
fn eps_sweep_is_quadratic_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"));
    let v = summary(&tfloc(&["sweep", "--family", "eps", "--d", "1", "--eps", "0.02:0.2:8", "--csv", &a]));
    assert!((v["slope"].as_f64().unwrap() - 2.0).abs() <= 0.15);
    summary(&tfloc(&["sweep", "--family", "eps", "--d", "1", "--eps", "0.02:0.2:8", "--csv", &b]));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("param,measure,hs_sq,hs_sq_star,deficit,alpha,beta,empirical_constant\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn dumbbell_sweep_slope() {
    let v = summary(&tfloc(&["sweep", "--family", "dumbbell", "--r", "2,3,4,6"]));
    assert!(v["slope"].as_f64().unwrap() <= 1.65);
    assert_eq!(v["points"], 4);
}

#[test]
fn probe_sweep_runs() {
    let v = summary(&tfloc(&["sweep", "--family", "conj2"]));
    assert!(v["slope"].as_f64().unwrap().is_finite());
    assert_eq!(tfloc(&["sweep", "--family", "conj2", "--b", "0.5,1,5"]).status.code(), Some(2));
}

#[test]
fn spectrum_csv_descends_and_sums_to_area() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "eig.csv");
    let v = summary(&tfloc(&["spectrum", "--ball", "1", "--h", "0.05", "--csv", &csv]));
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["index", "eigenvalue"]);
    let eig: Vec<f64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert!(eig.windows(2).all(|w| w[0] >= w[1]));
    let sum: f64 = eig.iter().sum();
    assert!((sum - PI).abs() / PI < 0.01);
    assert!((v["trace"].as_f64().unwrap() - sum).abs() < 1e-9);
}

#[test]
fn stft_gaussian_lieb_slack_vanishes() {
    let v = summary(&tfloc(&["stft", "--demo", "gaussian", "--lieb", "4"]));
    assert!(v["lieb"]["slack"].as_f64().unwrap().abs() < 1e-4);
    assert!(v["isometry_gap"].as_f64().unwrap() < 1e-4);
}

#[test]
fn hyper_kernel_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "rho.csv");
    let v = summary(&tfloc(&["hyper", "--kernel", "--beta", "1", "--csv", &csv]));
    assert_eq!(v["monotone"], true);
    let rows = csv::Reader::from_path(&csv).unwrap().records().count();
    assert_eq!(rows, 101);
    let b = summary(&tfloc(&["hyper", "--ball", "1"]));
    assert!((b["ball"]["nu_measure"].as_f64().unwrap() - 3.41229).abs() < 2e-5);
}

#[test]
fn run_config() {
    let dir = tempfile::tempdir().unwrap();
    let good = path(dir.path(), "good.json");
    std::fs::write(&good, r#"{"command": "sweep", "params": {"family": "eps", "eps": "0.05,0.1,0.2"}}"#).unwrap();
    let v = summary(&tfloc(&["run", "--config", &good]));
    assert_eq!(v["family"], "eps");
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, r#"{"command": "sweep", "params": {"family": "eps", "epsilon": "0.1"}}"#).unwrap();
    assert_eq!(tfloc(&["run", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_tfloc"))
        .args(["hs", "--ball", "1"])
        .env("TFLOC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_tfloc"))
        .args(["hs", "--ball", "1"])
        .env("TFLOC_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
