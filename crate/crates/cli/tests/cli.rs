use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use steerkit_cli::ReportDocument;

const SCHEMA: &str = include_str!("../schema/steerkit-report-1.schema.json");

fn steerkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steerkit"))
        .args(args)
        .env_remove("STEERKIT_TOLERANCE_LP")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value, String) {
    let out = steerkit(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    validate(&value);
    (out.status.code().unwrap(), value, stdout)
}

fn validate(value: &Value) {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(value)
        .map(|e| format!("{e} at {}", e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn num(v: &Value, pointer: &str) -> f64 {
    v.pointer(pointer)
        .and_then(Value::as_f64)
        .unwrap_or_else(|| panic!("no number at {pointer}"))
}

#[test]
fn paradox_qubit_two_equals_one() {
    let (code, v, _) = report(&["paradox-qubit", "--theta", "0.7854", "--settings", "z,x"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "contradiction");
    assert!((num(&v, "/result/certificate/lhsTraceSum") - 2.0).abs() <= 1e-9);
    assert!((num(&v, "/result/certificate/quantumTraceSum") - 1.0).abs() <= 1e-9);
    assert_eq!(
        v["result"]["certificate"]["collapsed"]
            .as_array()
            .unwrap()
            .len(),
        4
    );
}

#[test]
fn separable_boundary_exits_one() {
    let (code, v, _) = report(&["paradox-qubit", "--theta", "0", "--settings", "z,x"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["certificate"]["applicable"], false);
    assert_eq!(v["verdict"], "separable");
}

#[test]
fn ghz_exits_zero() {
    let (code, v, _) = report(&["ghz"]);
    assert_eq!(code, 0);
    let values: Vec<f64> = v["result"]["expectations"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    for (got, want) in values.iter().zip([1.0, -1.0, -1.0, -1.0]) {
        assert!((got - want).abs() <= 1e-12);
    }
    assert_eq!(v["result"]["lhv"]["satisfyingAssignments"], 0);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["--bogus"][..],
        &["paradox-qubit", "--theta", "abc"],
        &["teleport"],
        &[],
        &["paradox-qubit"],
        &["ghz", "--tol-lp", "-1"],
    ] {
        let out = steerkit(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(steerkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn precondition_failures_exit_one_with_report() {
    for args in [
        &["paradox-qubit", "--theta", "0.5", "--settings", "z,z"][..],
        &["paradox-qubit", "--theta", "0.5", "--settings", "z"],
        &["paradox-qubit", "--theta", "2.0"],
        &["paradox-qudit", "--d", "3", "--settings", "y,Z"],
        &[
            "separable-lhs",
            "--beta",
            "0.3",
            "--settings",
            "bloch:0:0:0,x",
        ],
    ] {
        let (code, v, _) = report(args);
        assert_eq!(code, 1, "{args:?}");
        assert_eq!(v["result"]["kind"], "error");
    }
}

#[test]
fn theta_sweep_fifty_points() {
    let (code, v, _) = report(&["sweep", "--grid", "theta=0.01:1.5607963267948966:50"]);
    assert_eq!(code, 0);
    let points = v["result"]["points"].as_array().unwrap();
    assert_eq!(points.len(), 50);
    for p in points {
        assert_eq!(p["report"]["verdict"], "contradiction");
        assert!((num(p, "/report/result/certificate/contradictionMagnitude") - 1.0).abs() <= 1e-9);
    }
    assert!((num(&v, "/result/summary/minContradictionMagnitude") - 1.0).abs() <= 1e-9);
    assert!((num(&v, "/result/summary/maxContradictionMagnitude") - 1.0).abs() <= 1e-9);
}

#[test]
fn qudit_sweep_two_versus_one() {
    let (code, v, _) = report(&["sweep", "--grid", "d=2..6"]);
    assert_eq!(code, 0);
    for p in v["result"]["points"].as_array().unwrap() {
        assert!((num(p, "/report/result/certificate/lhsTraceSum") - 2.0).abs() <= 1e-9);
        assert!((num(p, "/report/result/certificate/quantumTraceSum") - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn k_sweep_magnitudes() {
    let (code, v, _) = report(&["sweep", "--grid", "k=2,3,4", "--theta", "pi/3"]);
    assert_eq!(code, 0);
    let mags: Vec<f64> = v["result"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| num(p, "/report/result/certificate/contradictionMagnitude"))
        .collect();
    for (m, want) in mags.iter().zip([1.0, 2.0, 3.0]) {
        assert!((m - want).abs() <= 1e-9, "{mags:?}");
    }
}

#[test]
fn empty_grid_exits_one() {
    for grid in ["theta=0:1:0", "d=6..2", "k="] {
        let (code, v, _) = report(&["sweep", "--grid", grid]);
        assert_eq!(code, 1, "{grid}");
        assert_eq!(v["result"]["kind"], "error");
    }
}

#[test]
fn sweep_over_separable_point_reports_one() {
    let (code, v, _) = report(&["sweep", "--grid", "theta=0,0.5"]);
    assert_eq!(code, 1);
    assert_eq!(
        v["result"]["summary"]["exitCodeCounts"],
        serde_json::json!([1, 1, 0])
    );
}

#[test]
fn feasibility_and_separable_scenarios() {
    let (code, v, _) = report(&[
        "feasibility",
        "--theta",
        "pi/4",
        "--candidates",
        "axis-eigenstates",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "infeasible_within_ansatz");
    assert!(num(&v, "/result/outcome/maxResidual") >= 0.01);

    let (code, v, _) = report(&[
        "separable-lhs",
        "--beta",
        "0.7",
        "--settings",
        "angle:0.2,angle:1.3",
    ]);
    assert_eq!(code, 0);
    assert!(num(&v, "/result/reconstructionDeviation") <= 1e-10);
    assert_eq!(v["result"]["feasibility"]["status"], "feasible_model_found");
}

#[test]
fn nopa_and_qudit_scenarios() {
    let (code, v, _) = report(&["paradox-nopa", "--r", "1", "--d", "20"]);
    assert_eq!(code, 0);
    assert!((num(&v, "/result/truncationWeight") - 1f64.tanh().powi(40)).abs() <= 1e-12);
    let (code, _, _) = report(&["paradox-qudit", "--lambdas", "0.6,0.8"]);
    assert_eq!(code, 0);
}

#[test]
fn reports_round_trip_byte_stably() {
    for args in [
        &["paradox-qubit", "--theta", "0.7854"][..],
        &["paradox-qudit", "--d", "4"],
        &["separable-lhs", "--beta", "0.4"],
        &["feasibility", "--theta", "pi/8"],
        &["ghz"],
        &["sweep", "--grid", "k=2,3"],
        &["paradox-qubit", "--theta", "0"],
    ] {
        let (_, _, text) = report(args);
        let doc = ReportDocument::from_json(&text).unwrap();
        assert_eq!(doc.to_json().unwrap(), text, "{args:?}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(
        &path,
        "# qubit run\nscenario = paradox-qubit\ntheta = 0\nsettings = z,x\ntol_lp = 1e-7\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();

    let (code, v, _) = report(&["--config", cfg]);
    assert_eq!(code, 1);
    assert_eq!(num(&v, "/config/tolerances/tolLp"), 1e-7);

    let (code, v, _) = report(&["--config", cfg, "--theta", "pi/4"]);
    assert_eq!(code, 0);
    assert_eq!(num(&v, "/config/theta"), std::f64::consts::FRAC_PI_4);

    let (code, v, _) = report(&["ghz", "--config", cfg]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["scenario"], "ghz");
}

#[test]
fn env_overrides_tol_lp() {
    let run = |extra: &[&str]| {
        let mut args = vec!["ghz"];
        args.extend_from_slice(extra);
        let out = Command::new(env!("CARGO_BIN_EXE_steerkit"))
            .args(&args)
            .env("STEERKIT_TOLERANCE_LP", "3e-6")
            .output()
            .unwrap();
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        num(&v, "/config/tolerances/tolLp")
    };
    assert_eq!(run(&[]), 3e-6);
    assert_eq!(run(&["--tol-lp", "1e-5"]), 1e-5);
}

#[test]
fn text_format_and_output_file() {
    let out = steerkit(&["paradox-qubit", "--theta", "pi/4", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.contains(": ")));
    assert!(text
        .lines()
        .any(|l| l == "result.certificate.lhsTraceSum: 2.0"));
    assert!(text.lines().any(|l| l == "schema: steerkit-report/1"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = steerkit(&["ghz", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(Path::new(&path)).unwrap();
    validate(&serde_json::from_str(&written).unwrap());
}
