use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn chebosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chebosc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn schema() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(doc: &Value) {
    let schema = schema();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn check<'a>(doc: &'a Value, name: &str) -> &'a Value {
    doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("missing check {name}"))
}

#[test]
fn verify_defaults_pass() {
    let out = chebosc(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["overall_status"], "pass");
    assert_eq!(doc["config"]["dim"], 64);
    assert_eq!(doc["config"]["source"], "derived");
    assert_valid(&doc);
}

#[test]
fn verify_first_kind_explicit_flags() {
    let out = chebosc(&[
        "verify", "--kind", "first", "--dim", "64", "--source", "derived", "--tol", "1e-12",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_rejects_tiny_dimension() {
    let out = chebosc(&["verify", "--dim", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("minimum dimension"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--tol", "0"][..],
        &["verify", "--tol", "-1e-3"],
        &["verify", "--kind", "third"],
        &["frobnicate"],
        &["coherent", "--x-min", "-2"],
        &["coherent", "--x-points", "0"],
        &["table", "--format", "json"],
        &["table", "--dim", "2"],
        &["boundary", "--dim", "4", "--samples", "8"],
    ] {
        assert_eq!(chebosc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn second_kind_paper_source_reports_b0_mismatch() {
    let out = chebosc(&["verify", "--kind", "second", "--source", "paper"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_valid(&doc);
    let c = check(&doc, "paper_recurrence_coefficients");
    assert_eq!(c["informational"], true);
    assert_eq!(c["matches_paper_claim"], false);
    let r = c["residual"].as_f64().unwrap();
    assert!((r - (std::f64::consts::FRAC_1_SQRT_2 - 0.5)).abs() < 1e-12);
    assert!(c["note"].as_str().unwrap().contains("0.2071"));
}

#[test]
fn informational_checks_never_flip_status() {
    for kind in ["first", "second"] {
        for source in ["paper", "derived"] {
            let out = chebosc(&["verify", "--kind", kind, "--source", source]);
            let doc = json(&out);
            let checks = doc["checks"].as_array().unwrap();
            let hard_ok = checks
                .iter()
                .filter(|c| c["informational"] == false)
                .all(|c| c["passed"] == true);
            assert!(checks
                .iter()
                .any(|c| c["informational"] == true && c["passed"] == false));
            assert_eq!(hard_ok, out.status.code() == Some(0), "{kind} {source}");
            assert_eq!(doc["overall_status"], if hard_ok { "pass" } else { "fail" });
        }
    }
}

#[test]
fn failing_hard_check_exits_one() {
    // Too few terms for the norm series at this modulus.
    let out = chebosc(&["coherent", "--z-re", "0.7", "--dim", "8"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["overall_status"], "fail");
    assert_eq!(check(&doc, "norm_series_vs_closed")["passed"], false);
    assert_valid(&doc);
}

#[test]
fn coherent_outside_disk_is_domain_error() {
    let out = chebosc(&["coherent", "--z-re", "0.8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("convergence disk"));
    let out = chebosc(&["coherent", "--z-re", "0.5", "--z-im", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coherent_at_origin_is_constant_one() {
    let out = chebosc(&["coherent", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,series_re,series_im,closed_re,closed_im,abs_diff"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 101);
    for r in rows {
        assert_eq!(r[3], 1.0);
        assert_eq!(r[4], 0.0);
    }
}

#[test]
fn coherent_first_kind_sweep_agrees() {
    let out = chebosc(&["coherent", "--kind", "first", "--z-re", "0.3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let max = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(max < 1e-10, "{max}");
}

#[test]
fn coherent_json_carries_norm_summary() {
    let out = chebosc(&["coherent", "--kind", "second", "--z-re", "0.3"]);
    let doc = json(&out);
    assert_valid(&doc);
    let norm = &doc["data"]["norm"];
    let expect = 1.0 / (1.0 - 2.0 * 0.09);
    assert!((norm["closed"].as_f64().unwrap() - expect).abs() < 1e-14);
    assert!((norm["paper_claimed"].as_f64().unwrap() - expect).abs() < 1e-14);
    assert_eq!(doc["data"]["rows"].as_array().unwrap().len(), 101);
}

fn table(args: &[&str]) -> Vec<Vec<String>> {
    let out = chebosc(args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,b_n,x_offdiag,p_offdiag_im,number_diag,b_of_n_diag,h_diag,h_eigenvalue")
    );
    lines.map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn table_first_kind_coefficients() {
    let rows = table(&["table", "--kind", "first", "--dim", "8"]);
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0][1], "7.0710678118654757e-1");
    assert_eq!(rows[1][1], "5.0000000000000000e-1");
    assert_eq!(rows[2][1], "5.0000000000000000e-1");
}

#[test]
fn table_second_kind_hamiltonian_diagonal() {
    let rows = table(&["table", "--kind", "second", "--dim", "8"]);
    let h: Vec<f64> = rows.iter().take(6).map(|r| r[6].parse().unwrap()).collect();
    assert!((h[0] - 0.5).abs() < 1e-15);
    assert!(h[1..].iter().all(|v| (v - 1.0).abs() < 1e-15));
    assert!(rows[6][6].is_empty() && rows[7][6].is_empty());
}

#[test]
fn table_number_diagonal() {
    let rows = table(&["table", "--dim", "3"]);
    let n: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(n, vec![0.0, 1.0, 2.0]);
}

#[test]
fn csv_values_have_seventeen_significant_digits() {
    let rows = table(&["table", "--dim", "4"]);
    for cell in rows.iter().flat_map(|r| r.iter().skip(1)).filter(|c| !c.is_empty()) {
        let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{cell}");
    }
}

#[test]
fn boundary_command() {
    let out = chebosc(&["boundary", "--kind", "second", "--dim", "32", "--samples", "128"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_valid(&doc);
    assert_eq!(check(&doc, "paper_boundary_delta_measure")["matches_paper_claim"], true);
    let out = chebosc(&["boundary", "--kind", "first", "--dim", "32", "--samples", "128"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(
        check(&doc, "paper_boundary_delta_measure")["matches_paper_claim"],
        false
    );
}

#[test]
fn output_is_byte_identical_across_runs() {
    let cases: [&[&str]; 5] = [
        &["verify", "--kind", "second"],
        &["coherent", "--z-re", "-0.2", "--z-im", "0.2"],
        &["coherent", "--z-im", "0.3", "--format", "csv"],
        &["table", "--kind", "first"],
        &["boundary", "--format", "csv"],
    ];
    for args in cases {
        let a = chebosc(args);
        let b = chebosc(args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = chebosc(&["verify", "--dim", "16", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, chebosc(&["verify", "--dim", "16"]).stdout);
    assert_valid(&serde_json::from_slice(&written).unwrap());
}

#[test]
fn every_command_validates_against_schema() {
    for args in [
        &["verify", "--kind", "first", "--source", "paper"][..],
        &["verify", "--kind", "second", "--dim", "8"],
        &["coherent", "--kind", "first", "--z-re", "0.3", "--x-points", "7"],
        &["boundary", "--kind", "first", "--dim", "6"],
    ] {
        assert_valid(&json(&chebosc(args)));
    }
}
