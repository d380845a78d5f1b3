use std::process::{Command, Output};

use sta::check;
use sta::{Params, EXIT_CHECK_FAILED, EXIT_CONFIG};
use sta_core::pulse::PulseSchedule;
use sta_core::Mat2;

fn sta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sta"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &tempfile::TempDir, body: &str) -> String {
    let path = dir.path().join("config.json");
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

fn parse_csv(bytes: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"atom": {"gamma_mhz": 2, "detuning": 3}}"#);
    let out = sta(&["rap", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&out.stderr).contains("detuning"));
}

#[test]
fn malformed_json_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "{ atom: }");
    assert_eq!(
        sta(&["rap", "--config", &cfg]).status.code(),
        Some(EXIT_CONFIG)
    );
    let missing = dir.path().join("nope.json").display().to_string();
    assert_eq!(
        sta(&["rap", "--config", &missing]).status.code(),
        Some(EXIT_CONFIG)
    );
}

#[test]
fn invalid_values_are_rejected() {
    assert_eq!(sta(&["rap", "--dt", "-1"]).status.code(), Some(EXIT_CONFIG));
    assert_eq!(
        sta(&["rap", "--window-factor", "0"]).status.code(),
        Some(EXIT_CONFIG)
    );
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"oscillator": {"mass_kg": -1}}"#);
    assert_eq!(
        sta(&["oscillator", "--config", &cfg]).status.code(),
        Some(EXIT_CONFIG)
    );
}

#[test]
fn writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = sta(&["cd-terms", "--dt", "0.05", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let (header, rows) = parse_csv(&std::fs::read(&path).unwrap());
    assert_eq!(
        header,
        ["t_ns", "ReC_rad_per_ns", "ImC_rad_per_ns", "adiab_ratio"]
    );
    assert!(rows.len() > 100);
}

#[test]
fn hermitian_limit_gives_full_inversion() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"atom": {"gamma_mhz": 0}}"#);
    let out = sta(&["rap-cd", "--config", &cfg, "--dt", "1e-2"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&out.stdout);
    let p1 = header.iter().position(|h| h == "P1").unwrap();
    let last = rows.last().unwrap();
    assert!((last[p1] - 1.0).abs() < 1e-6, "{}", last[p1]);
}

#[test]
fn approx_flag_matches_approx_scenario() {
    let a = sta(&["rap-cd", "--approx", "--dt", "2e-2"]);
    let b = sta(&["rap-cd-approx", "--dt", "2e-2"]);
    let c = sta(&["rap-cd", "--dt", "2e-2"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn oscillator_at_rest_emits_zeros_with_notice() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"oscillator": {"q0_um": 0, "v0_um_per_ms": 0}}"#);
    let out = sta(&["oscillator", "--config", &cfg]);
    assert!(out.status.success());
    assert!(!out.stderr.is_empty());
    let (header, rows) = parse_csv(&out.stdout);
    let q = header.iter().position(|h| h == "q_um").unwrap();
    assert!(rows.iter().all(|r| r[q] == 0.0));
}

#[test]
fn check_passes_and_fails_with_tight_tolerances() {
    let out = sta(&["check"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.lines().filter(|l| l.starts_with("[PASS]")).count() >= 10);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"check": {"tolerance_scale": 1e-12}}"#);
    let out = sta(&["check", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(EXIT_CHECK_FAILED));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL]"));
}

fn flipped_h1(s: &PulseSchedule, t: f64) -> sta_core::Result<Mat2> {
    Ok(-sta_core::ctrlh::h_a1(s, t)?)
}

#[test]
fn check_suite_catches_sign_error() {
    let report = check::run_with(&Params::default(), flipped_h1).unwrap();
    let failed: Vec<_> = report
        .items
        .iter()
        .filter(|i| !i.passed)
        .map(|i| i.name)
        .collect();
    assert!(failed.contains(&"transitionless residual"), "{failed:?}");
    assert!(
        failed.contains(&"numerical vs analytic counterdiabatic term"),
        "{failed:?}"
    );
    assert!(report.into_result().is_err());
}
