use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_socp-recovery"))
        .args(args)
        .env_remove("SOCP_RECOVERY_THREADS")
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn predict_sqrt_m() {
    let v = json(&["predict", "--alpha", "0.5", "--beta-over-alpha", "0.2", "--r-mode", "sqrt-m"]);
    assert!((f(&v["w_norm"]) - 1.5790).abs() < 1e-3);
    assert!((f(&v["nu_gen"]) - 0.6899).abs() < 1e-3);
}

#[test]
fn predict_optimal_radius_zeroes_the_objective() {
    let v = json(&["predict", "--alpha", "0.5", "--beta-over-alpha", "0.2", "--r-mode", "opt"]);
    assert!(f(&v["xi_prim_limit"]).abs() < 1e-8);
}

#[test]
fn predict_accepts_beta_directly_and_signed() {
    let a = json(&["predict", "--alpha", "0.5", "--beta", "0.15", "--signed"]);
    assert!((f(&a["w_norm"]) - 1.8471).abs() < 1e-3);
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec!["predict", "--beta-over-alpha", "0.2"],
        vec!["predict", "--alpha", "0.5"],
        vec!["predict", "--alpha", "0.5", "--beta-over-alpha", "0.2", "--r-mode", "scaled:1.5"],
        vec!["predict", "--alpha", "0.5", "--beta-over-alpha", "0.2", "--r-mode", "wide"],
        vec!["predict", "--alpha", "0.5", "--beta-over-alpha", "2"],
        vec!["contour", "--rho", "2", "--beta-grid", "1"],
        vec!["genie", "--alpha", "0.3", "--beta-over-alpha", "0.18", "--n", "100", "--trials", "5"],
        vec!["table", "--id", "9", "--theory-only"],
        vec!["table", "--id", "2"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn above_threshold_radius_is_a_domain_error() {
    let out = run(&["predict", "--alpha", "0.3", "--beta-over-alpha", "0.9", "--r-mode", "opt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_succeeds() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn contour_csv_contains_known_point() {
    let out = run(&["contour", "--rho", "2", "--beta-grid", "200", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho,beta_w,alpha,mode"));
    let row = lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|c| c[1].parse::<f64>().unwrap() == 0.135)
        .expect("beta 0.135 on the grid");
    assert!((row[2].parse::<f64>().unwrap() - 0.5).abs() < 5e-4);
    assert_eq!(row[3], "optimal-radius");
}

#[test]
fn sqrt_alpha_contour_lies_above_optimal() {
    let v = json(&["contour", "--rho", "2", "--beta-grid", "20", "--mode", "optimal-radius,sqrt-alpha-radius"]);
    let curves = v.as_array().unwrap();
    assert_eq!(curves.len(), 2);
    let opt = curves[0]["points"].as_array().unwrap();
    let sq = curves[1]["points"].as_array().unwrap();
    assert!(!sq.is_empty());
    for p in sq {
        let q = opt.iter().find(|q| q["beta_w"] == p["beta_w"]).unwrap();
        assert!(f(&p["alpha"]) >= f(&q["alpha"]) - 1e-12);
    }
}

#[test]
fn simulate_is_reproducible_across_threads() {
    let args = [
        "simulate", "--alpha", "0.5", "--beta-over-alpha", "0.2", "--n", "100", "--trials", "6", "--seed", "7",
        "--engine", "both",
    ];
    let a = run(&args);
    let b = run(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["empirical"]["w_norm_socp"]["mean"].is_number());
}

#[test]
fn genie_mean_nu_near_table_value() {
    let v = json(&[
        "genie", "--alpha", "0.3", "--beta-over-alpha", "0.18", "--n", "1000", "--trials", "200", "--seed", "11",
    ]);
    let nu = f(&v["empirical"]["nu_gen"]["mean"]);
    assert!((nu - 0.6157).abs() / 0.6157 < 0.03, "nu = {nu}");
}

#[test]
fn table_theory_only() {
    let v = json(&["table", "--id", "2", "--theory-only"]);
    for row in v["rows"].as_array().unwrap() {
        let w = row["cells"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["stat"] == "w_norm_genie")
            .unwrap();
        assert!((f(&w["theory"]) - 2.0).abs() < 1e-6);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("socp-recovery-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("predict.csv");
    let out = run(&[
        "predict", "--alpha", "0.5", "--beta-over-alpha", "0.2", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("alpha,beta_w,"));
    std::fs::remove_dir_all(&dir).unwrap();
}
