//! Runs the built binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use httool::table::{parse, render, Row};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn httool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_httool"))
        .args(args)
        .env_remove("HTTOOL_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("scenario.cfg");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn converging_scenario_exits_zero_and_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "family = pareto\nbeta = 1\nalpha = 2\ntheta = 1\ndiagnostics = T1f, T1h\ngrid = 10:10:6\n",
    );
    let out = httool(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("httool_out/T1f.csv")).unwrap();
    let rows = parse(&csv).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.theoretical_limit == 1.0));
    assert!(rows.last().unwrap().rel_error < 1e-4);
    assert!(dir.path().join("httool_out/summary.txt").exists());
}

#[test]
fn slow_diagnostic_exits_one() {
    // On the boundary family T1d decays like 1 / (alpha ln x).
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "family = boundary_rv\nalpha0 = 1\nalpha = 1\ntheta = 0\ndiagnostics = T1d\n");
    let out = httool(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("NOT CONVERGED"));
}

#[test]
fn theta_outside_regime_exits_two_naming_theta() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "family = pareto\nbeta = 1\nalpha = 2\ntheta = 3\ndiagnostics = T1f\n");
    let out = httool(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("theta"), "{}", stderr(&out));
}

#[test]
fn unwritable_output_dir_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "not a directory").unwrap();
    let cfg = write_config(
        dir.path(),
        "family = exponential\nalpha = 1\ndiagnostics = corollary\noutput_dir = blocker/out\n",
    );
    let out = httool(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn missing_config_exits_three() {
    let out = httool(&["run", "/nonexistent/scenario.cfg"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn env_overrides_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("elsewhere");
    let cfg = write_config(dir.path(), "family = pareto\nbeta = 1\nalpha = 2\ntheta = 1\ndiagnostics = T1f\ngrid = 10:10:4\n");
    let out = Command::new(env!("CARGO_BIN_EXE_httool"))
        .args(["run", &cfg])
        .env("HTTOOL_OUTPUT_DIR", &target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(target.join("T1f.csv").exists());
    assert!(!dir.path().join("httool_out").exists());
}

#[test]
fn estimate_recovers_h_index_from_pareto_samples() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let body: String = (0..100_000)
        .map(|_| {
            let u: f64 = rng.random();
            format!("{}\n", 1.0 / (1.0 - u))
        })
        .collect();
    let samples = dir.path().join("samples.txt");
    fs::write(&samples, body).unwrap();
    let out_dir = dir.path().join("est");
    let out = httool(&[
        "estimate",
        samples.to_str().unwrap(),
        "--alpha",
        "2",
        "--t",
        "2",
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let h: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("H index estimate: "))
        .expect("no H estimate")
        .parse()
        .unwrap();
    assert!((h - 1.0).abs() < 0.1, "H index {h}");
    let csv = fs::read_to_string(out_dir.join("estimate.csv")).unwrap();
    assert!(csv.starts_with("x,h_slope,w_slope,status\n"));
}

#[test]
fn bad_sample_line_exits_two_naming_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.txt");
    fs::write(&samples, "1.0\n2.5\nabc\n").unwrap();
    let out = httool(&["estimate", samples.to_str().unwrap(), "--alpha", "1", "--t", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn transform_prints_closed_form_value() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "family = pareto\nbeta = 1\nalpha = 2\n");
    let out = httool(&["transform", &cfg, "--kind", "H", "--x", "1000"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!((v - 999.0).abs() < 1e-8, "{v}");
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), -1e3f64..1e3]
}

proptest! {
    #[test]
    fn csv_round_trips(rows in prop::collection::vec((finite(), finite(), finite(), finite()), 0..20)) {
        let rows: Vec<Row> = rows
            .into_iter()
            .map(|(x, value, theoretical_limit, rel_error)| Row { x, value, theoretical_limit, rel_error })
            .collect();
        prop_assert_eq!(parse(&render(&rows)).unwrap(), rows);
    }
}
