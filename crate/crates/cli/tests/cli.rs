//! End-to-end tests of the `spectra` binary: output bytes, report shapes,
//! and exit codes.

use serde_json::Value;
use std::process::{Command, Output};

fn spectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn construct_folded_two_edge_list() {
    let out = spectra(&["construct", "folded", "--k", "2", "--format", "edge-list"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "# n=6\n0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n"
    );
}

#[test]
fn construct_odd_three_json_has_subset_labels() {
    let out = spectra(&["construct", "odd", "--k", "3", "--format", "json"]);
    assert_eq!(code_of(&out), 0);
    let g: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(g["n"], 10);
    assert_eq!(g["edges"].as_array().unwrap().len(), 15);
    let labels = g["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 10);
    assert_eq!(labels[0]["subset"], 3);
    assert_eq!(labels[0]["parity"], 0);
}

#[test]
fn construct_rejects_k_below_two() {
    let out = spectra(&["construct", "odd", "--k", "1"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn construct_rejects_unknown_family() {
    let out = spectra(&["construct", "heptagonal", "--k", "3"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn spectrum_double_odd_three() {
    let out = spectra(&["spectrum", "double-odd", "--k", "3"]);
    assert_eq!(code_of(&out), 0);
    let s: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(
        s["pairs"],
        serde_json::json!([[-3, 1], [-2, 4], [-1, 5], [1, 5], [2, 4], [3, 1]])
    );
    assert_eq!(s["residual"], 0);
}

#[test]
fn spectrum_folded_two() {
    let out = spectra(&["spectrum", "folded", "--k", "2"]);
    assert_eq!(code_of(&out), 0);
    let s: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(s["pairs"], serde_json::json!([[-3, 1], [0, 4], [3, 1]]));
}

#[test]
fn spectrum_rejects_k_over_capacity() {
    let out = spectra(&["spectrum", "double-odd", "--k", "7"]);
    assert_eq!(code_of(&out), 3);
}

#[test]
fn verify_all_small_range() {
    let out = spectra(&["verify", "all", "--k", "2..4"]);
    assert_eq!(code_of(&out), 0, "allowlisted discrepancy must not fail");
    let reports: Vec<Value> = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(reports.len(), 27);
    for (i, r) in reports.iter().enumerate() {
        let claim = format!("C{}", i / 3 + 1);
        let k = i % 3 + 2;
        assert_eq!(r["claim_id"], claim.as_str(), "report order");
        assert_eq!(r["k"], k, "report order");
        assert!(r["evidence"].is_object(), "evidence payload present");
    }
    let refuted: Vec<&Value> = reports
        .iter()
        .filter(|r| r["verdict"] == "REFUTED")
        .collect();
    assert_eq!(refuted.len(), 1);
    assert_eq!(refuted[0]["claim_id"], "C7");
    assert_eq!(refuted[0]["k"], 2);
    assert!(reports.iter().all(|r| r["verdict"] != "UNVERIFIED"));
}

#[test]
fn verify_c5_through_twelve() {
    let out = spectra(&["verify", "C5", "--k", "2..12"]);
    assert_eq!(code_of(&out), 0);
    let reports: Vec<Value> = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(reports.len(), 11);
    assert!(reports.iter().all(|r| r["verdict"] == "PASS"));
}

#[test]
fn verify_c7_allowlist_toggle() {
    let strict = spectra(&["verify", "C7", "--k", "2", "--no-allowlist"]);
    assert_eq!(code_of(&strict), 1, "refutation must surface");
    let default = spectra(&["verify", "C7", "--k", "2"]);
    assert_eq!(code_of(&default), 0, "allowlist downgrades the known case");
}

#[test]
fn verify_rejects_bad_arguments() {
    assert_eq!(code_of(&spectra(&["verify", "C10", "--k", "2"])), 2);
    assert_eq!(code_of(&spectra(&["verify", "all", "--k", "4..2"])), 2);
    assert_eq!(code_of(&spectra(&["verify", "all", "--k", "1..3"])), 2);
    assert_eq!(code_of(&spectra(&["verify", "all", "--k", "x"])), 2);
    assert_eq!(
        code_of(&spectra(&["verify", "C1", "--k", "2", "--format", "edge-list"])),
        2
    );
}

#[test]
fn verify_respects_max_k_flag() {
    let capped = spectra(&["verify", "C1", "--k", "6"]);
    let reports: Vec<Value> = serde_json::from_str(&stdout_of(&capped)).unwrap();
    assert_eq!(reports[0]["verdict"], "UNVERIFIED");
    let raised = spectra(&["verify", "C1", "--k", "6", "--max-k", "6"]);
    let reports: Vec<Value> = serde_json::from_str(&stdout_of(&raised)).unwrap();
    assert_eq!(reports[0]["verdict"], "PASS", "{}", reports[0]["evidence"]);
    assert_eq!(reports[0]["evidence"]["computed_diameter"], 11);
}

#[test]
fn verify_k_range_alias() {
    let out = spectra(&["verify", "C1", "--k-range", "2..3"]);
    let reports: Vec<Value> = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(reports.len(), 2);
}

#[test]
fn verify_markdown_format() {
    let out = spectra(&["verify", "C1,C5", "--k", "2..3", "--format", "md"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("| C1 |"));
    assert!(text.contains("| C5 |"));
    assert!(text.contains("PASS"));
    assert!(!text.contains("| C2 |"), "unselected claims stay out");
}

#[test]
fn verify_writes_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("report");
    let out = spectra(&["verify", "C1", "--k", "2", "--out", base.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let json = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let reports: Vec<Value> = serde_json::from_str(&json).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["verdict"], "PASS");
    let md = std::fs::read_to_string(dir.path().join("report.md")).unwrap();
    assert!(md.contains("| C1 |"));
    assert_eq!(stdout_of(&out), json, "stdout carries the same report");
}

#[test]
fn reports_are_byte_identical_across_runs_and_seeds() {
    let args = ["verify", "C1,C3,C8", "--k", "2..3"];
    let first = spectra(&args);
    let second = spectra(&args);
    assert_eq!(first.stdout, second.stdout);
    let seeded = Command::new(env!("CARGO_BIN_EXE_spectra"))
        .args(args)
        .env("SPECTRA_SEED", "12345")
        .output()
        .unwrap();
    assert_eq!(first.stdout, seeded.stdout, "seed env var must not matter");
}

#[test]
fn construct_markdown_format() {
    let out = spectra(&["construct", "double-odd", "--k", "2", "--format", "md"]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("2O_2"));
    assert!(text.contains("- vertices: 6"));
    assert!(text.contains("# n=6"));
}

#[test]
fn construct_out_file_matches_stdout_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let to_file = spectra(&[
        "construct",
        "odd",
        "--k",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&to_file), 0);
    let direct = spectra(&["construct", "odd", "--k", "3"]);
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        stdout_of(&direct)
    );
}
