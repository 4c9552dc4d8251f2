//! End-to-end tests driving the compiled binary through temp directories.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rigidity"));
    // keep tests hermetic no matter what the outer shell exports
    cmd.env_remove("RIGIDITY_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn write_spec(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn golden_rotation_spec(dir: &Path) -> PathBuf {
    let angle = TAU * 0.618_033_988_749_894_9;
    write_spec(
        dir,
        "golden.json",
        &format!(r#"{{"version": 1, "seed": 7, "operator": {{"kind": "rotation", "angle": {angle}, "dim": 4}}}}"#),
    )
}

fn eighth_roots_spec(dir: &Path) -> PathBuf {
    let angles: Vec<String> = (0..8).map(|k| (k as f64 * TAU / 8.0).to_string()).collect();
    write_spec(
        dir,
        "roots8.json",
        &format!(
            r#"{{"version": 1, "operator": {{"kind": "spectral", "angles": [{}], "weights": [0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125]}}}}"#,
            angles.join(", ")
        ),
    )
}

fn shift_spec(dir: &Path) -> PathBuf {
    write_spec(
        dir,
        "shift.json",
        r#"{"version": 1, "operator": {"kind": "shift", "dim": 12}}"#,
    )
}

fn identity_spec(dir: &Path) -> PathBuf {
    write_spec(
        dir,
        "identity.json",
        r#"{"version": 1, "operator": {"kind": "rotation", "angle": 0.0, "dim": 4}}"#,
    )
}

fn group_spec(dir: &Path) -> PathBuf {
    write_spec(
        dir,
        "group.json",
        r#"{"version": 1, "seed": 3, "group": {"freqs": [1.0, 2.5, -4.0]}}"#,
    )
}

fn csv_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect()
}

// ---------------------------------------------------------------------------
// build

#[test]
fn build_merges_rotation_spectrum_into_one_atom() {
    let tmp = TempDir::new().unwrap();
    let spec = golden_rotation_spec(tmp.path());
    let out = run(&["build", spec.to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kind: spectral"), "{text}");
    assert!(text.contains("spectral atoms: 1"), "{text}");
}

#[test]
fn build_scores_uniform_eighth_roots_at_one_eighth() {
    let tmp = TempDir::new().unwrap();
    let spec = eighth_roots_spec(tmp.path());
    let out = run(&["build", spec.to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("continuity score: 0.125"), "{text}");
}

#[test]
fn build_rejects_weights_summing_to_nine_tenths() {
    let tmp = TempDir::new().unwrap();
    let spec = write_spec(
        tmp.path(),
        "bad.json",
        r#"{"version": 1, "operator": {"kind": "spectral", "angles": [0.0, 1.0], "weights": [0.5, 0.4]}}"#,
    );
    let out = run(&["build", spec.to_str().unwrap()]);
    assert_exit(&out, 3);
}

#[test]
fn build_rejects_malformed_json_as_parse_error() {
    let tmp = TempDir::new().unwrap();
    let spec = write_spec(tmp.path(), "broken.json", "{this is not json");
    let out = run(&["build", spec.to_str().unwrap()]);
    assert_exit(&out, 2);
}

#[test]
fn build_rejects_unknown_keys() {
    let tmp = TempDir::new().unwrap();
    let spec = write_spec(
        tmp.path(),
        "extra.json",
        r#"{"version": 1, "operator": {"kind": "shift", "dim": 4, "speed": 9}}"#,
    );
    let out = run(&["build", spec.to_str().unwrap()]);
    assert_exit(&out, 3);
}

#[test]
fn build_rejects_missing_file_as_parse_error() {
    let out = run(&["build", "/nonexistent/nowhere.json"]);
    assert_exit(&out, 2);
}

// ---------------------------------------------------------------------------
// search

#[test]
fn search_identity_certifies_the_first_eight_times() {
    let tmp = TempDir::new().unwrap();
    let spec = identity_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "search",
        spec.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("certificate.json"));
    assert_eq!(doc["found"], Value::Bool(true));
    let times: Vec<u64> = doc["certificate"]["times"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(times, vec![1, 2, 3, 4, 5, 6, 7, 8]);
}

#[test]
fn search_golden_rotation_finds_the_known_return_times() {
    let tmp = TempDir::new().unwrap();
    let spec = golden_rotation_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "search",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("certificate.json"));
    let times: Vec<u64> = doc["certificate"]["times"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(times, vec![34, 55, 89, 144, 178, 199, 233, 267]);
    for r in doc["certificate"]["residuals"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() < 0.1);
    }

    // the trace covers every scanned time with no gaps
    let rows = csv_rows(&out_dir.join("trace.csv"));
    assert_eq!(rows[0], "n,residual");
    assert_eq!(rows.len(), 268);
    for (i, row) in rows[1..].iter().enumerate() {
        let n: u64 = row.split(',').next().unwrap().parse().unwrap();
        assert_eq!(n, i as u64 + 1);
    }
}

#[test]
fn search_lane_restricts_times_to_the_arithmetic_progression() {
    let tmp = TempDir::new().unwrap();
    let spec = write_spec(
        tmp.path(),
        "rational.json",
        r#"{"version": 1, "operator": {"kind": "rational_rotation", "p": 1, "q": 8, "dim": 3}}"#,
    );
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "search",
        spec.to_str().unwrap(),
        "--lane",
        "8:0",
        "--epsilon",
        "0.01",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("certificate.json"));
    let times: Vec<u64> = doc["certificate"]["times"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(times, vec![8, 16, 24, 32, 40, 48, 56, 64]);

    // scanned rows stay inside the lane and keep the stride
    let rows = csv_rows(&out_dir.join("trace.csv"));
    for (i, row) in rows[1..].iter().enumerate() {
        let n: u64 = row.split(',').next().unwrap().parse().unwrap();
        assert_eq!(n, (i as u64 + 1) * 8);
    }
}

#[test]
fn search_shift_ends_without_certificate_but_with_reason() {
    let tmp = TempDir::new().unwrap();
    let spec = shift_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "search",
        spec.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("certificate.json"));
    assert_eq!(doc["found"], Value::Bool(false));
    assert!(doc.get("certificate").is_none());
    assert_eq!(doc["not_found"]["scanned"], Value::from(10_000u64));
    assert!(!doc["not_found"]["reason"].as_str().unwrap().is_empty());
    assert_eq!(csv_rows(&out_dir.join("trace.csv")).len(), 10_001);
}

#[test]
fn search_group_certifies_grid_times() {
    let tmp = TempDir::new().unwrap();
    let spec = group_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "search",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.75",
        "--tmax",
        "200",
        "--step",
        "0.5",
        "--max-terms",
        "3",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("certificate.json"));
    assert_eq!(doc["found"], Value::Bool(true));
    let ts: Vec<f64> = doc["certificate"]["grid_times"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(ts, vec![12.5, 25.0, 25.5]);
    let rows = csv_rows(&out_dir.join("trace.csv"));
    assert_eq!(rows[0], "t,residual");
}

#[test]
fn search_artifacts_are_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    let spec = golden_rotation_spec(tmp.path());
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = run(&[
            "search",
            spec.to_str().unwrap(),
            "--epsilon",
            "0.1",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_exit(&out, 0);
    }
    assert_eq!(
        std::fs::read(a.join("certificate.json")).unwrap(),
        std::fs::read(b.join("certificate.json")).unwrap()
    );
    assert_eq!(
        std::fs::read(a.join("trace.csv")).unwrap(),
        std::fs::read(b.join("trace.csv")).unwrap()
    );
}

#[test]
fn search_honors_the_seed_environment_override() {
    let tmp = TempDir::new().unwrap();
    let spec = golden_rotation_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = bin()
        .args([
            "search",
            spec.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .env("RIGIDITY_SEED", "4242")
        .output()
        .unwrap();
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("certificate.json"));
    assert_eq!(doc["seed"], Value::from(4242u64));
    assert!(doc["probe_label"].as_str().unwrap().contains("seed=4242"));
}

#[test]
fn search_rejects_a_non_numeric_seed_override() {
    let tmp = TempDir::new().unwrap();
    let spec = golden_rotation_spec(tmp.path());
    let out = bin()
        .args(["search", spec.to_str().unwrap()])
        .env("RIGIDITY_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_exit(&out, 2);
}

#[test]
fn search_lambda_angle_targets_an_eighth_root() {
    let tmp = TempDir::new().unwrap();
    let spec = write_spec(
        tmp.path(),
        "rational.json",
        r#"{"version": 1, "operator": {"kind": "rational_rotation", "p": 1, "q": 8, "dim": 3}}"#,
    );
    let out_dir = tmp.path().join("run");
    let angle = (TAU / 8.0).to_string();
    let out = run(&[
        "search",
        spec.to_str().unwrap(),
        "--lambda-angle",
        &angle,
        "--epsilon",
        "0.01",
        "--max-terms",
        "4",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("certificate.json"));
    let times: Vec<u64> = doc["certificate"]["times"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(times, vec![1, 9, 17, 25]);
}

#[test]
fn search_rejects_conflicting_lambda_flags() {
    let tmp = TempDir::new().unwrap();
    let spec = identity_spec(tmp.path());
    let out = run(&[
        "search",
        spec.to_str().unwrap(),
        "--lambda",
        "1,0",
        "--lambda-angle",
        "0.5",
    ]);
    assert_exit(&out, 2);
}

#[test]
fn search_rejects_crossed_time_flags() {
    let tmp = TempDir::new().unwrap();
    let group = group_spec(tmp.path());
    let op = identity_spec(tmp.path());
    let out = run(&["search", group.to_str().unwrap(), "--horizon", "50"]);
    assert_exit(&out, 3);
    let out = run(&["search", op.to_str().unwrap(), "--tmax", "5"]);
    assert_exit(&out, 3);
}

#[test]
fn search_rejects_a_degenerate_lane() {
    let tmp = TempDir::new().unwrap();
    let spec = identity_spec(tmp.path());
    let out = run(&["search", spec.to_str().unwrap(), "--lane", "0:0"]);
    assert_exit(&out, 3);
    let out = run(&["search", spec.to_str().unwrap(), "--lane", "gibberish"]);
    assert_exit(&out, 2);
}

// ---------------------------------------------------------------------------
// approximate

#[test]
fn approximate_negative_one_reports_the_octagon_chord() {
    let tmp = TempDir::new().unwrap();
    let spec = eighth_roots_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "approximate",
        spec.to_str().unwrap(),
        "--lambda",
        "-1,0",
        "--min-period",
        "8",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("approximant.json"));
    assert_eq!(doc["period"], Value::from(8u64));
    let bound = doc["bound"].as_f64().unwrap();
    assert!((bound - 2.0 * (std::f64::consts::PI / 8.0).sin()).abs() < 1e-12);
    assert!(doc["verified_residual"].as_f64().unwrap() < 1e-10);

    // the emitted model is itself a loadable spec
    let out = run(&["build", out_dir.join("model.json").to_str().unwrap()]);
    assert_exit(&out, 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kind: spectral"), "{text}");
}

#[test]
fn approximate_keeps_an_already_periodic_model_fixed() {
    let tmp = TempDir::new().unwrap();
    let spec = eighth_roots_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "approximate",
        spec.to_str().unwrap(),
        "--min-period",
        "8",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("approximant.json"));
    assert_eq!(doc["sup_diff"].as_f64().unwrap(), 0.0);
}

#[test]
fn approximate_refuses_non_spectral_kinds() {
    let tmp = TempDir::new().unwrap();
    let spec = shift_spec(tmp.path());
    let out = run(&["approximate", spec.to_str().unwrap()]);
    assert_exit(&out, 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("shift"));
}

#[test]
fn approximate_continuous_solves_the_uniform_window_bound() {
    let tmp = TempDir::new().unwrap();
    let spec = group_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "approximate",
        spec.to_str().unwrap(),
        "--continuous",
        "--epsilon",
        "0.45",
        "--t0",
        "1.0",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("approximant.json"));
    assert_eq!(doc["mode"], Value::from("continuous"));
    assert_eq!(doc["period"], Value::from(32u64));
    assert!(doc["bound"].as_f64().unwrap() <= 0.45);
    assert!(doc["verified_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn approximate_continuous_requires_a_group_section() {
    let tmp = TempDir::new().unwrap();
    let spec = identity_spec(tmp.path());
    let out = run(&["approximate", spec.to_str().unwrap(), "--continuous"]);
    assert_exit(&out, 4);
}

// ---------------------------------------------------------------------------
// density

#[test]
fn density_of_shift_displacement_is_full() {
    let tmp = TempDir::new().unwrap();
    let spec = shift_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "density",
        spec.to_str().unwrap(),
        "--probe",
        "basis:0",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("density.json"));
    assert_eq!(doc["estimate"].as_f64().unwrap(), 1.0);
    assert_eq!(doc["hits"], Value::from(10_000u64));
}

#[test]
fn density_of_identity_is_zero_below_threshold_one() {
    let tmp = TempDir::new().unwrap();
    let spec = identity_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "density",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("density.json"));
    assert_eq!(doc["estimate"].as_f64().unwrap(), 0.0);
    // the Dirac spectral measure pins the trace average at 1
    assert_eq!(doc["spectral_wiener"].as_f64().unwrap(), 1.0);
}

#[test]
fn density_of_many_incommensurate_angles_is_nearly_full() {
    let tmp = TempDir::new().unwrap();
    let angles: Vec<String> = [
        2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
    ]
    .iter()
    .map(|&p| (TAU * ((p as f64).sqrt().fract())).to_string())
    .collect();
    let spec = write_spec(
        tmp.path(),
        "many.json",
        &format!(
            r#"{{"version": 1, "operator": {{"kind": "spectral", "angles": [{}], "weights": [0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625, 0.0625]}}}}"#,
            angles.join(", ")
        ),
    );
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "density",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.5",
        "--horizon",
        "100000",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("density.json"));
    let estimate = doc["estimate"].as_f64().unwrap();
    assert!(estimate >= 0.9, "estimate {estimate}");
    assert_eq!(estimate, 0.98404);
    // the observed density clears the Chebyshev floor computed from the trace
    let floor = doc["chebyshev_floor"].as_f64().unwrap();
    let wiener = doc["trace_wiener"].as_f64().unwrap();
    assert!((floor - (1.0 - wiener / 0.25)).abs() < 1e-12);
    assert!(estimate >= floor - 1e-12);
    // dual route: the same average straight from the spectral measure
    let spectral = doc["spectral_wiener"].as_f64().unwrap();
    assert!((spectral - wiener).abs() < 1e-9);
}

#[test]
fn density_rejects_an_out_of_range_basis_probe() {
    let tmp = TempDir::new().unwrap();
    let spec = identity_spec(tmp.path());
    let out = run(&["density", spec.to_str().unwrap(), "--probe", "basis:99"]);
    assert_exit(&out, 3);
}

#[test]
fn density_group_scan_traces_the_sampled_grid() {
    let tmp = TempDir::new().unwrap();
    let spec = group_spec(tmp.path());
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "density",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.9",
        "--tmax",
        "50",
        "--step",
        "0.25",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let doc = read_json(&out_dir.join("density.json"));
    assert_eq!(doc["samples"], Value::from(200u64));
    let rows = csv_rows(&out_dir.join("trace.csv"));
    assert_eq!(rows[0], "t,coefficient");
    assert_eq!(rows.len(), 201);
}

// ---------------------------------------------------------------------------
// report

#[test]
fn report_consolidates_and_reverifies_fresh_artifacts() {
    let tmp = TempDir::new().unwrap();
    let golden = golden_rotation_spec(tmp.path());
    let shift = shift_spec(tmp.path());
    let run_dir = tmp.path().join("artifacts");

    let out = run(&[
        "search",
        golden.to_str().unwrap(),
        "--epsilon",
        "0.1",
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    std::fs::rename(
        run_dir.join("certificate.json"),
        run_dir.join("golden_search.json"),
    )
    .unwrap();
    let out = run(&[
        "search",
        shift.to_str().unwrap(),
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    std::fs::rename(
        run_dir.join("certificate.json"),
        run_dir.join("shift_search.json"),
    )
    .unwrap();
    let out = run(&[
        "density",
        shift.to_str().unwrap(),
        "--probe",
        "basis:0",
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    // a foreign document must not derail consolidation
    std::fs::write(run_dir.join("notes.json"), r#"{"found": "my keys"}"#).unwrap();

    let out = run(&["report", run_dir.to_str().unwrap()]);
    assert_exit(&out, 0);
    let report = read_json(&run_dir.join("report.json"));
    let certs = report["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 1);
    assert_eq!(certs[0]["file"], Value::from("golden_search.json"));
    assert_eq!(certs[0]["verified"], Value::Bool(true));
    assert_eq!(certs[0]["hit_count"], Value::from(8u64));
    let missing = report["not_found"].as_array().unwrap();
    assert_eq!(missing.len(), 1);
    assert_eq!(missing[0]["file"], Value::from("shift_search.json"));
    assert_eq!(report["densities"].as_array().unwrap().len(), 1);
    assert_eq!(report["seeds"].as_array().unwrap().len(), 2);
    assert_eq!(
        report["skipped"].as_array().unwrap(),
        &vec![Value::from("notes.json")]
    );
}

#[test]
fn report_lists_approximant_files_without_merging_them() {
    let tmp = TempDir::new().unwrap();
    let spec = eighth_roots_spec(tmp.path());
    let run_dir = tmp.path().join("artifacts");
    let out = run(&[
        "approximate",
        spec.to_str().unwrap(),
        "--min-period",
        "8",
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let out = run(&["report", run_dir.to_str().unwrap()]);
    assert_exit(&out, 0);
    let report = read_json(&run_dir.join("report.json"));
    assert!(report["certificates"].as_array().unwrap().is_empty());
    let skipped = report["skipped"].as_array().unwrap();
    assert_eq!(
        skipped,
        &vec![
            Value::from("approximant.json"),
            Value::from("model.json")
        ]
    );
}

#[test]
fn report_reverifies_group_certificates() {
    let tmp = TempDir::new().unwrap();
    let spec = group_spec(tmp.path());
    let run_dir = tmp.path().join("artifacts");
    let out = run(&[
        "search",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.75",
        "--tmax",
        "200",
        "--step",
        "0.5",
        "--max-terms",
        "3",
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let out = run(&["report", run_dir.to_str().unwrap()]);
    assert_exit(&out, 0);
    let report = read_json(&run_dir.join("report.json"));
    let certs = report["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 1);
    assert_eq!(certs[0]["verified"], Value::Bool(true));
    assert_eq!(certs[0]["first_time"].as_f64().unwrap(), 12.5);
}

#[test]
fn report_flags_a_tampered_residual() {
    let tmp = TempDir::new().unwrap();
    let spec = golden_rotation_spec(tmp.path());
    let run_dir = tmp.path().join("artifacts");
    let out = run(&[
        "search",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.1",
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);

    let cert_path = run_dir.join("certificate.json");
    let mut doc: Value = read_json(&cert_path);
    doc["certificate"]["residuals"][0] = Value::from(0.0999);
    std::fs::write(&cert_path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let out = run(&["report", run_dir.to_str().unwrap()]);
    assert_exit(&out, 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("certificate.json"));
}

#[test]
fn report_on_an_empty_directory_is_empty_but_valid() {
    let tmp = TempDir::new().unwrap();
    let out = run(&["report", tmp.path().to_str().unwrap()]);
    assert_exit(&out, 0);
    let report = read_json(&tmp.path().join("report.json"));
    assert!(report["certificates"].as_array().unwrap().is_empty());
    assert!(report["not_found"].as_array().unwrap().is_empty());
    assert!(report["densities"].as_array().unwrap().is_empty());
}
