use std::path::PathBuf;
use std::process::{Command, Output};

use kmethod_core::graph::parse_matrix;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn kmethod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmethod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

#[test]
fn k_matrix_csv_round_trips_through_the_matrix_parser() {
    let out = kmethod(&["k-matrix", "--input", &fixture("four_node.csv")]);
    assert!(out.status.success());
    let net = parse_matrix(&stdout(&out)).expect("output parses as a matrix");
    let dense = net.to_dense();
    assert_eq!(net.labels(), ["alpha", "1", "2", "beta"]);
    assert!((dense[(0, 3)] - 2.4).abs() < 1e-12);
    assert!((dense[(1, 3)] - 4.0 / 3.0).abs() < 1e-8);
}

#[test]
fn k_matrix_json_has_labels_rows_and_truncation() {
    let out = kmethod(&["k-matrix", "--input", &fixture("four_node.csv"), "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["labels"][3], "beta");
    assert_eq!(doc["rows"][0][3], 2.4);
    assert_eq!(doc["truncated"], false);
}

#[test]
fn length_cap_marks_output_truncated() {
    let out = kmethod(&["k-matrix", "--input", &fixture("four_node.csv"), "--max-len", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("# truncated: true\n"));
}

#[test]
fn k_pair_reports_value_and_path_count() {
    let out = kmethod(&[
        "k-pair", "--input", &fixture("four_node.csv"), "--from", "alpha", "--to", "beta",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "from,to,k,paths,truncated\nalpha,beta,2.4,4,false\n");
}

#[test]
fn k_pair_writes_circuit_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("circuit.dot");
    let out = kmethod(&[
        "k-pair", "--input", &fixture("four_node.csv"), "--from", "alpha", "--to", "beta",
        "--emit-circuit", dot.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("graph circuit {"));
    assert!(text.contains("\"alpha\""));
}

#[test]
fn paths_are_listed_in_search_order() {
    let out = kmethod(&[
        "paths", "--input", &fixture("four_node.csv"), "--from", "alpha", "--to", "beta",
    ]);
    assert!(out.status.success());
    let lines: Vec<_> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(
        lines,
        [
            "path,length,emf",
            "alpha -> 1 -> 2 -> beta,3,3",
            "alpha -> 1 -> beta,2,2",
            "alpha -> 2 -> 1 -> beta,3,3",
            "alpha -> 2 -> beta,2,2",
        ]
    );
}

#[test]
fn edge_list_input_is_inferred_from_extension() {
    let out = kmethod(&["impulse", "--input", &fixture("two_cycle.json"), "--steps", "40"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# converged: false"));
    assert!(text.contains("diverging: true"));
}

#[test]
fn rank_json_lists_every_node() {
    let out = kmethod(&[
        "rank", "--input", &fixture("san_diego.csv"), "--measure", "influence", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ranks: Vec<u64> = doc["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, [2, 9, 1, 4, 3, 5, 6, 8, 7]);
}

#[test]
fn warnings_go_to_stderr() {
    let out = kmethod(&["k-matrix", "--input", &fixture("san_diego.csv")]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("warning"));
    assert!(!stdout(&out).contains("warning"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.csv");
    let out = kmethod(&[
        "k-matrix", "--input", &fixture("four_node.csv"), "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(path).unwrap().starts_with("node,alpha"));
}

#[test]
fn compare_formats_agree_on_ranks() {
    let json = kmethod(&["compare", "--input", &fixture("san_diego.csv"), "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["k_method"]["pressure_rank"][0], 8);
    assert_eq!(doc["impulse_converged"], true);
    let text = kmethod(&["compare", "--input", &fixture("san_diego.csv")]);
    assert!(stdout(&text).contains("spearman"));
}

#[test]
fn exit_codes_distinguish_failures() {
    let missing = kmethod(&["k-matrix", "--input", "/nonexistent/net.csv"]);
    assert_eq!(missing.status.code(), Some(1));

    let unknown = kmethod(&[
        "k-pair", "--input", &fixture("four_node.csv"), "--from", "nope", "--to", "beta",
    ]);
    assert_eq!(unknown.status.code(), Some(1));

    let budget = kmethod(&["k-matrix", "--input", &fixture("san_diego.csv"), "--budget", "3"]);
    assert_eq!(budget.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let singular = dir.path().join("singular.csv");
    std::fs::write(&singular, "node,a,b\na,0,1\nb,1,0\n").unwrap();
    let out = kmethod(&["impulse", "--input", singular.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    let amplitude = kmethod(&[
        "rank", "--input", &fixture("four_node.csv"), "--method", "impulse",
        "--measure", "amplitude-pressure",
    ]);
    assert_eq!(amplitude.status.code(), Some(1));
}

#[test]
fn malformed_matrix_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "node,a,b\na,0,x\nb,1,0\n").unwrap();
    let out = kmethod(&["k-matrix", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}
