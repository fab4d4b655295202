mod common;

use std::io::Write;
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use serde_json::Value;
use stabigraph::cli::NetworkDocument;

const FIG2: &str = r#"{"n": 6, "edges": [
  {"i": 0, "j": 1, "w": 1}, {"i": 0, "j": 2, "w": 1}, {"i": 1, "j": 2, "w": 1},
  {"i": 2, "j": 3, "w": 1}, {"i": 3, "j": 4, "w": 1}, {"i": 4, "j": 5, "w": 1}]}"#;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_stabigraph"))
        .args(args)
        .env("STABIGRAPH_THREADS", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn verdict_code(v: &Value) -> i32 {
    match v["verdict"].as_str().unwrap() {
        "stable" => 0,
        "unstable" => 1,
        _ => 2,
    }
}

#[test]
fn fig2_table_and_tsv() {
    let out = run(&["certify", "--table"], FIG2);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let phi: Vec<f64> = v["minors"].as_array().unwrap().iter().map(|r| r["phi"].as_f64().unwrap()).collect();
    let d: Vec<f64> = v["minors"].as_array().unwrap().iter().map(|r| r["d"].as_f64().unwrap()).collect();
    assert_eq!(phi, vec![2.0, 3.0, 3.0, 3.0, 3.0]);
    assert_eq!(d, vec![-2.0, 3.0, -3.0, 3.0, -3.0]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.tsv");
    let out = run(&["certify", "--tsv", path.to_str().unwrap(), "--exact"], FIG2);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out).get("minors").is_none());
    let tsv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], "k\tS\tD\tPhi");
    assert_eq!(lines[1], "1\t0\t-2\t2");
    assert_eq!(lines[5], "5\t0,1,2,3,4\t-3\t3");
}

#[test]
fn negative_pair_is_cut() {
    let out = run(&["certify"], "# n = 2\n0 1 -1\n");
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["path"], "no-positive-spanning-tree");
    assert_eq!(v["witnesses"]["cut"]["crossing"], serde_json::json!([[0, 1]]));
}

#[test]
fn adaptive_negative_decay() {
    let out = run(&["certify", "--mode", "adaptive"], r#"{"x": [0.0, 0.3, 0.5], "b": -1}"#);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["reason"], "b>0 violated");
    let out = run(&["certify", "--mode", "adaptive", "--table"], r#"{"x": [0.0, 0.1, 0.2], "b": 1}"#);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["diagnostics"]["variables"], 6);
    assert_eq!(v["minors"].as_array().unwrap().len(), 5);
}

#[test]
fn kuramoto_modes() {
    let locked = r#"{"edges": [{"i": 0, "j": 1, "w": 1}], "omega": [0.3, -0.3]}"#;
    let out = run(&["certify", "--mode", "kuramoto"], locked);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["diagnostics"]["state"]["residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["witnesses"]["phase_rule"]["spans"], true);

    let drifting = r#"{"edges": [{"i": 0, "j": 1, "w": 1}], "omega": [1.5, -1.5]}"#;
    assert_eq!(run(&["certify", "--mode", "kuramoto"], drifting).status.code(), Some(2));

    let cubic = r#"{"edges": [{"i": 0, "j": 1, "w": 1}], "omega": [0.1, -0.1], "coupling": "cubic"}"#;
    assert_eq!(run(&["certify", "--mode", "kuramoto"], cubic).status.code(), Some(0));
}

#[test]
fn input_errors_exit_three() {
    let cases: [(&[&str], &str); 7] = [
        (&["certify"], "{not json"),
        (&["certify"], r#"{"n": 2, "edges": [{"i": 0, "j": 2, "w": 1}]}"#),
        (&["certify"], r#"{"n": 2, "edges": [{"i": 1, "j": 0, "w": 1}]}"#),
        (&["certify", "--mode", "kuramoto"], r#"{"n": 3, "edges": [], "omega": [1, 2]}"#),
        (&["certify", "--mode", "adaptive"], r#"{"x": [0, 1]}"#),
        (&["certify", "--strategy", "sampled:x"], "0 1 1\n"),
        (&["certify", "--mode", "nonsense"], "0 1 1\n"),
    ];
    for (args, input) in cases {
        let out = run(args, input);
        assert_eq!(out.status.code(), Some(3), "{args:?} {input}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn strategies_and_tolerance_flags() {
    let signed = "0 1 2\n1 2 2\n0 2 -0.5\n";
    for strategy in ["nested", "all", "sampled:5"] {
        let out = run(&["certify", "--strategy", strategy, "--seed", "3", "--tol-zero", "1e-12"], signed);
        assert_eq!(out.status.code(), Some(0), "{strategy}");
        let v = json(&out);
        assert_eq!(v["path"], "numeric");
        assert_eq!(v["diagnostics"]["tol_zero"], 1e-12);
    }
    // complete graph on four nodes; the other paths give conductance 1
    let unstable = "0 1 -1.5\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n";
    let out = run(&["certify", "--exact"], unstable);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["path"], "numeric");
    assert!(v["witnesses"]["minor"].is_object());
    let stable = unstable.replace("-1.5", "-0.9");
    assert_eq!(run(&["certify", "--exact"], &stable).status.code(), Some(0));
}

#[test]
fn verify_is_deterministic_and_catches_mutation() {
    let args = ["verify", "--seed", "5", "--max-n", "5", "--cases", "20"];
    let a = run(&args, "");
    let b = run(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mutated = run(&["verify", "--seed", "5", "--max-n", "5", "--cases", "20", "--mutate-sign"], "");
    assert_eq!(mutated.status.code(), Some(1));
    let text = String::from_utf8(mutated.stdout).unwrap();
    let forest_line = text.lines().find(|l| l.starts_with("forest-sum-identity")).unwrap();
    assert!(!forest_line.contains(" 0 failed"));
}

#[test]
fn flips_and_expand_subcommands() {
    let one = r#"{"matrix": [[0, 1, 2], [1, 0, 0.5], [2, 0.5, 0]], "flips": [[0, 1]]}"#;
    let two = r#"{"matrix": [[0, 1, 2], [1, 0, 0.5], [2, 0.5, 0]], "flips": [[0, 1], [1, 2]]}"#;
    assert_eq!(run(&["flips", "--exact"], one).status.code(), Some(1));
    let out = run(&["flips"], two);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["admissible"], true);
    assert_eq!(run(&["flips"], r#"{"matrix": [[0, 1], [2, 0]]}"#).status.code(), Some(3));

    let out = run(&["expand", "4"], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "x.x.x.x - x.x.| + |.| + 2x.C3 - 2C4");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn document_round_trip((n, edges) in common::arb_graph(1, 7, -3, 3), omega in proptest::option::of(proptest::collection::vec(-2.0..2.0f64, 7))) {
        let mut doc = NetworkDocument::from_graph(&common::graph(n, &edges));
        doc.omega = omega.map(|o| o[..n].to_vec());
        let again = NetworkDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(&again, &doc);
        let text = common::graph(n, &edges).to_edge_list();
        prop_assert_eq!(NetworkDocument::parse(&text).unwrap().graph().unwrap(), doc.graph().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn report_agrees_with_exit_code((n, edges) in common::arb_graph(1, 6, -2, 3)) {
        let doc = NetworkDocument::from_graph(&common::graph(n, &edges));
        let out = run(&["certify"], &doc.to_json());
        prop_assert_eq!(out.status.code(), Some(verdict_code(&json(&out))));
    }
}
