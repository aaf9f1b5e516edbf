//! End-to-end tests of the command-line interface: golden files, format
//! round-trips, determinism, and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetacn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn golden_scan_5_100_csv() {
    let output = run(&["scan", "5", "100", "--format", "csv"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), include_str!("golden/scan_5_100.csv"));
}

#[test]
fn classify_json_round_trips_byte_identically() {
    let output = run(&["classify", "7", "--format", "json"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    let mut reserialized = serde_json::to_string_pretty(&value).expect("serializable");
    reserialized.push('\n');
    assert_eq!(text, reserialized, "JSON must round-trip byte-identically");
    assert_eq!(value["non_tn"], "certified");
    assert_eq!(value["curves"]["pi_3"]["s_prime"], serde_json::json!([-21, -3, 1, 7]));
}

#[test]
fn scan_json_round_trips_byte_identically() {
    let output = run(&["scan", "5", "40", "--format", "json"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    let mut reserialized = serde_json::to_string_pretty(&value).expect("serializable");
    reserialized.push('\n');
    assert_eq!(text, reserialized);
    let rows = value.as_array().expect("array of records");
    assert_eq!(rows[0]["n"], 5);
    assert_eq!(rows[0]["tn_witness"]["x_num"], -1);
    assert_eq!(rows[0]["tn_witness"]["y_num"], 8);
}

#[test]
fn scan_is_deterministic_across_jobs() {
    let first = run(&["scan", "5", "200", "--format", "json", "--jobs", "8"]);
    let second = run(&["scan", "5", "200", "--format", "json", "--jobs", "3"]);
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout, "output bytes must not depend on --jobs");
}

#[test]
fn scan_reversed_range_is_empty_success() {
    let output = run(&["scan", "9", "5"]);
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
}

#[test]
fn scan_only_certified_keeps_certified_rows() {
    let output = run(&["scan", "5", "100", "--format", "csv", "--only-certified"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert!(lines.next().expect("header").starts_with("n,"));
    let mut rows = 0;
    for line in lines {
        assert!(line.contains("certified"), "row without certificate: {line}");
        rows += 1;
    }
    assert!(rows > 0, "the range [5, 100] contains certified n");
}

#[test]
fn classify_out_of_scope_exits_two() {
    let output = run(&["classify", "12"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty());
}

#[test]
fn graph_non_square_free_exits_two() {
    let output = run(&["graph", "12"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["graph", "0"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["graph", "1"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn graph_text_reports_structure() {
    let output = run(&["graph", "--", "-21"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("vertices {-1, 3, 7}"));
    assert!(text.contains("7 -> -1"));
    assert!(text.contains("7 -> 3"));
}

#[test]
fn graph_dot_output() {
    let output = run(&["graph", "--format", "dot", "--", "-15"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.starts_with("digraph residue {"));
    // −15 has no source primes ≡ 1 (mod 3): three isolated vertices.
    assert!(text.contains("\"-1\";"));
    assert!(text.contains("\"3\";"));
    assert!(text.contains("\"5\";"));
    assert!(!text.contains("->"));
}

#[test]
fn graph_rejects_csv_format() {
    let output = run(&["graph", "7", "--format", "csv"]);
    assert_eq!(output.status.code(), Some(64));
}

#[test]
fn classify_rejects_dot_format() {
    let output = run(&["classify", "7", "--format", "dot"]);
    assert_eq!(output.status.code(), Some(64));
}

#[test]
fn selmer_dumps_both_groups() {
    let output = run(&["selmer", "5", "2pi3"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("E(5, 2pi/3)"));
    assert!(text.contains("s-rank = 1"));
    let output = run(&["selmer", "5", "2pi3", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["s_rank"], 1);
    assert_eq!(value["theta"], "2pi/3");
    assert_eq!(value["s"], serde_json::json!([1]));
}

#[test]
fn selmer_bad_curve_exits_two() {
    let output = run(&["selmer", "4", "pi3"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_small_range_exits_zero() {
    let output = run(&["verify", "5", "120"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("disagreements: none"));
    assert!(text.contains("conjecture anomalies: pi/3 none, 2pi/3 none"));
}

#[test]
fn verify_reversed_range_is_zero_counts() {
    let output = run(&["verify", "9", "5"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("checked 0"));
}

#[test]
fn search_point_finds_and_misses() {
    let output = run(&["search-point", "5", "2pi3", "--height", "10"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("(-1, 8)"));
    let output = run(&["search-point", "7", "pi3", "--height", "50"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("no point up to height 50"));
    let output = run(&["search-point", "7", "pi3", "--height", "5", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["found"], false);
    assert_eq!(value["point"], serde_json::Value::Null);
}

#[test]
fn search_point_usage_and_scope_errors() {
    let output = run(&["search-point", "5", "2pi3", "--height", "0"]);
    assert_eq!(output.status.code(), Some(64), "zero height is a usage error");
    let output = run(&["search-point", "4", "pi3"]);
    assert_eq!(output.status.code(), Some(2), "non-square-free n is out of scope");
    // A height whose cubed search bound cannot fit 128-bit integers is
    // refused up front rather than failing mid-scan.
    let output = run(&["search-point", "4611686018427387901", "pi3", "--height", "4294967295"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_sixty_four() {
    let output = run(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(64));
    let output = run(&["classify"]);
    assert_eq!(output.status.code(), Some(64));
    let output = run(&["classify", "seven"]);
    assert_eq!(output.status.code(), Some(64));
}

#[test]
fn help_and_version_exit_zero() {
    let output = run(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    let output = run(&["--version"]);
    assert_eq!(output.status.code(), Some(0));
}
