//! End-to-end tests of the `divisum` binary: exit codes, output formats,
//! and the JSON round-trip guarantee.

use divisum::identities::IdentityReport;
use std::process::{Command, Output};

fn divisum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divisum"))
        .args(args)
        .env_remove("DIVISUM_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn no_arguments_is_usage_error() {
    let out = divisum(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_command_and_unknown_names() {
    assert_eq!(divisum(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(divisum(&["eval", "nosuch", "q=0.1"]).status.code(), Some(2));
    assert_eq!(divisum(&["verify", "NOPE"]).status.code(), Some(2));
    assert_eq!(divisum(&["sweep", "NOPE", "x=1"]).status.code(), Some(2));
    assert_eq!(divisum(&["eval", "zeta", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn eval_theta4_example() {
    let out = divisum(&["eval", "theta4", "z=0", "q=0.1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("8.00199998"), "{}", stdout(&out));
}

#[test]
fn eval_zeta_example() {
    let out = divisum(&["eval", "zeta", "s=2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1.6449340668"), "{}", stdout(&out));
}

#[test]
fn eval_rrcf_example() {
    let out = divisum(&["eval", "rrcf", "q=0.01", "depth=20"]);
    assert_eq!(out.status.code(), Some(0));
    // 0.990100 to the displayed precision
    let text = stdout(&out);
    let value: f64 = text
        .lines()
        .next()
        .and_then(|l| l.split('=').nth(1))
        .and_then(|v| v.trim().parse().ok())
        .unwrap();
    assert!((value - 0.990100).abs() < 1e-6, "{text}");
}

#[test]
fn eval_domain_violation_exits_3() {
    assert_eq!(divisum(&["eval", "theta4", "z=0", "q=1.5"]).status.code(), Some(3));
    assert_eq!(divisum(&["eval", "zeta", "s=1"]).status.code(), Some(3));
    assert_eq!(divisum(&["eval", "log_theta_quotient_d2", "p=4", "a=1", "b=2", "x=1"]).status.code(), Some(3));
}

#[test]
fn eval_saturation_exits_4() {
    let out = divisum(&[
        "eval",
        "lambert_sum",
        "c=one",
        "denom=minus",
        "x=0.01",
        "--tol",
        "1e-30",
        "--max-terms",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stdout(&out));
    assert!(stdout(&out).contains("SATURATED"));
}

#[test]
fn verify_prop1_passes() {
    let out = divisum(&["verify", "PROP1", "f=poly:1", "x=1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn verify_thm1_trivial_window() {
    let out = divisum(&["verify", "THM1", "f=poly:1", "a=1", "b=1", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: IdentityReport = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report.lhs, 1.0);
    assert_eq!(report.rhs, 1.0);
}

#[test]
fn verify_mellin_ex4() {
    let out = divisum(&["verify", "MELLIN_EX4", "s=1.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn verify_domain_error_exits_3() {
    assert_eq!(divisum(&["verify", "EQ10", "x=-1"]).status.code(), Some(3));
    assert_eq!(divisum(&["verify", "THM2_4", "p=4", "a=1", "b=2"]).status.code(), Some(3));
}

#[test]
fn verify_json_round_trips_byte_identical() {
    let out = divisum(&["verify", "EQ10", "s=2", "x=0.7", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text.trim();
    let report: IdentityReport = serde_json::from_str(line).unwrap();
    let reserialized = serde_json::to_string(&report).unwrap();
    assert_eq!(line, reserialized);
}

#[test]
fn verify_csv_output() {
    let out = divisum(&["verify", "LEMMA7", "x=1", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("id,params,lhs,rhs"));
    assert!(lines.next().unwrap().starts_with("LEMMA7,"));
}

#[test]
fn sweep_eq11_grid_passes() {
    let out = divisum(&["sweep", "EQ11", "s=2,4", "x=0.5,1,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("passed 6/6"), "{}", stdout(&out));
}

#[test]
fn sweep_thm24_grid_passes() {
    let out = divisum(&["sweep", "THM2_4", "p=5", "a=1", "b=2", "x=0.5,1,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("passed 3/3"));
}

#[test]
fn sweep_empty_axis_yields_no_rows() {
    let out = divisum(&["sweep", "EQ11", "s="]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("passed 0/0"));
}

#[test]
fn sweep_range_syntax() {
    let out = divisum(&["sweep", "EQ10", "s=2", "x=0.5:2:0.5", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    // 0.5, 1.0, 1.5, 2.0 plus the header
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn sweep_failure_points_exit_1() {
    let out = divisum(&["sweep", "RRCF_EX3", "x=-1,1"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn list_has_23_rows() {
    let out = divisum(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 23);
    assert!(stdout(&out).contains("THM2_4"));
    assert!(stdout(&out).contains("Theorem 2.4"));
}

#[test]
fn list_json_is_valid_array() {
    let out = divisum(&["list", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 23);
    for row in arr {
        assert!(!row["paper_ref"].as_str().unwrap().is_empty());
    }
}

#[test]
fn high_precision_never_reports_larger_error() {
    for args in [
        vec!["verify", "EQ10", "s=2", "x=1", "--output", "json"],
        vec!["verify", "LEMMA7", "x=1", "--output", "json"],
        vec!["verify", "THETA_PRODUCT", "q=0.2", "t=0.3", "--output", "json"],
    ] {
        let std_out = divisum(&args);
        let mut high_args = args.clone();
        high_args.push("--precision");
        high_args.push("high");
        let high_out = divisum(&high_args);
        let std_report: IdentityReport = serde_json::from_str(stdout(&std_out).trim()).unwrap();
        let high_report: IdentityReport = serde_json::from_str(stdout(&high_out).trim()).unwrap();
        assert!(
            high_report.abs_err <= std_report.abs_err + 1e-15,
            "{args:?}: high {} vs standard {}",
            high_report.abs_err,
            std_report.abs_err
        );
    }
}

#[test]
fn precision_env_variable_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_divisum"))
        .args(["verify", "LEMMA7", "x=1"])
        .env("DIVISUM_PRECISION", "bogus")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_divisum"))
        .args(["verify", "LEMMA7", "x=1"])
        .env("DIVISUM_PRECISION", "high")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_code_is_function_of_status_only() {
    // a fail exit comes from the report status, not the output format
    for fmt in ["text", "json", "csv"] {
        let out = divisum(&["verify", "EQ10", "s=2", "x=1", "--tol", "1e-17", "--output", fmt]);
        assert_eq!(out.status.code(), Some(1), "fmt = {fmt}");
    }
}
