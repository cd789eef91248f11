//! End-to-end tests of the command-line binary: JSON/CSV/PGM output
//! shapes, exit codes, determinism, and round-trips back into the
//! library functions.

use std::process::{Command, Output};

use stabpoly::{optimal, stability, Axis};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stabpoly"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_parabolic_m3_matches_closed_form() {
    let out = run(&["gen", "--family", "parabolic", "--m", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["degree"], 3);
    let c: Vec<f64> = v["coeffs"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(c[0], 1.0);
    assert_eq!(c[1], 1.0);
    assert!((c[2] - 4.0 / 27.0).abs() < 1e-15);
    assert!((c[3] - 4.0 / 729.0).abs() < 1e-17);
}

#[test]
fn gen_then_interval_round_trips_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    for (family, m, axis) in [("parabolic", "3", "real"), ("disc", "4", "imag"), ("hyperbolic", "5", "imag")] {
        let path = dir.path().join(format!("{family}.json"));
        let out = run(&["gen", "--family", family, "--m", m, "--out", path.to_str().unwrap()]);
        assert!(out.status.success());

        let out = run(&["interval", "--poly", path.to_str().unwrap(), "--axis", axis]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        let cli_width = v["width"].as_f64().unwrap();

        // same measurement on the freshly parsed polynomial, in-process
        let text = std::fs::read_to_string(&path).unwrap();
        let p: stabpoly::RealPolynomial = serde_json::from_str(&text).unwrap();
        let ax = if axis == "real" { Axis::NegativeReal } else { Axis::Imaginary };
        let direct =
            stability::stability_width(&p, ax, stability::DEFAULT_EPS, stability::DEFAULT_TOL);
        assert_eq!(cli_width.to_bits(), direct.to_bits(), "{family}");
    }
}

#[test]
fn interval_disc_imag_width_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("disc.json");
    run(&["gen", "--family", "disc", "--m", "4", "--out", path.to_str().unwrap()]);
    let out = run(&["interval", "--poly", path.to_str().unwrap(), "--axis", "imag"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["width"].as_f64().unwrap(), 0.0);
}

#[test]
fn gen_hyperbolic_m1_fails_with_domain_error() {
    let out = run(&["gen", "--family", "hyperbolic", "--m", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["error"], "m_too_small");
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["gen", "--family", "disc", "--m", "3", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_substeps_schedule_shape() {
    let out = run(&["gen", "--family", "parabolic-substeps", "--m", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["m"], 4);
    assert_eq!(v["order"], "ascending");
    let xi: Vec<f64> = v["xi"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let expect = optimal::parabolic_substeps(4).unwrap();
    assert_eq!(xi, expect.xi());
}

#[test]
fn verify_markov_m7_passes() {
    let out = run(&["verify", "--check", "markov", "--m", "7"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["ratio"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_oracle_m2_disc() {
    let out = run(&["verify", "--check", "oracle", "--m", "2", "--target", "disc", "--step", "0.001"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);
    assert!((v["best_coeffs"][2].as_f64().unwrap() - 0.25).abs() <= 1e-3);
}

#[test]
fn region_csv_and_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("euler.json");
    run(&["gen", "--family", "disc", "--m", "1", "--out", path.to_str().unwrap()]);
    let out = run(&[
        "region", "--poly", path.to_str().unwrap(), "--box", "-3,1,-2,2", "--nx", "8", "--ny",
        "8", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,absP"));
    assert_eq!(text.lines().count(), 65);

    let out = run(&[
        "region", "--poly", path.to_str().unwrap(), "--box", "-3,1,-2,2", "--nx", "8", "--ny",
        "8", "--format", "pgm",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("P2"));
    assert_eq!(lines.next(), Some("8 8"));
    assert_eq!(lines.next(), Some("255"));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn region_degenerate_box_is_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    run(&["gen", "--family", "disc", "--m", "1", "--out", path.to_str().unwrap()]);
    let out = run(&[
        "region", "--poly", path.to_str().unwrap(), "--box", "1,-1,0,1", "--nx", "4", "--ny",
        "4", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["error"], "degenerate_box");
}

#[test]
fn simulate_is_deterministic_and_frontier_behaves() {
    let args = [
        "simulate", "--scheme", "composed", "--system", "heat", "--n", "32", "--m", "5",
        "--h-frac", "0.999", "--steps", "200", "--seed", "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same argv must give byte-identical output");
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,norm"));
    assert_eq!(text.lines().count(), 202);
    let first: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    let last: f64 = text.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(last <= first * (1.0 + 1e-6));

    let unstable = run(&[
        "simulate", "--scheme", "composed", "--system", "heat", "--n", "32", "--m", "5",
        "--h-frac", "1.05", "--steps", "1000", "--seed", "42",
    ]);
    let text = stdout(&unstable);
    assert!(text.lines().last().unwrap().starts_with("# aborted_at="));
}

#[test]
fn simulate_advection_composed_uses_polynomial_scheme() {
    let out = run(&[
        "simulate", "--scheme", "composed", "--system", "advection", "--n", "32", "--m", "5",
        "--h-frac", "0.999", "--steps", "100", "--seed", "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let first: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    let last: f64 = text.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(last <= first * (1.0 + 1e-4));
}

#[test]
fn tableau_subcommand_reports_rk4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rk4.json");
    let rk4 = serde_json::json!({
        "A": [[0.0,0.0,0.0,0.0],[0.5,0.0,0.0,0.0],[0.0,0.5,0.0,0.0],[0.0,0.0,1.0,0.0]],
        "b": [1.0/6.0, 1.0/3.0, 1.0/3.0, 1.0/6.0],
        "c": [0.0, 0.5, 0.5, 1.0]
    });
    std::fs::write(&path, serde_json::to_string(&rk4).unwrap()).unwrap();
    let out = run(&["tableau", "--file", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c: Vec<f64> = v["polynomial"]["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(c, vec![1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]);
    let wi = v["report"]["imag_width"].as_f64().unwrap();
    assert!((wi - 2.0 * 2.0f64.sqrt()).abs() <= 1e-6);
}

#[test]
fn tableau_rejects_implicit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("implicit.json");
    let t = serde_json::json!({ "A": [[0.5]], "b": [1.0], "c": [0.5] });
    std::fs::write(&path, serde_json::to_string(&t).unwrap()).unwrap();
    let out = run(&["tableau", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_lists_subcommands() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for sub in ["gen", "interval", "region", "verify", "simulate", "tableau"] {
        assert!(text.contains(sub), "missing {sub} in help");
    }
}
