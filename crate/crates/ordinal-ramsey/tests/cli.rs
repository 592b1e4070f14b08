//! End-to-end checks of the command-line interface: output shape and
//! the exit-code contract (0 verified/true, 1 falsified, 2 bad input).

use std::process::{Command, Output};

use ordinal_ramsey::graph::full_pair_mutant;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordinal-ramsey"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn informational_queries_exit_zero() {
    let out = run(&["ord", "cmp", "w*2+w^2", "w^2*2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("lt"), "{}", stdout(&out));

    let out = run(&["ord", "cb", "w^3+w^2*4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "rank=2 n=4");
}

#[test]
fn order_tests_signal_falsified_pairs() {
    assert_eq!(run(&["ord", "tree-leq", "w^2", "w^3"]).status.code(), Some(0));
    // Siblings of the same fan are incomparable.
    let out = run(&["ord", "tree-leq", "w^3+w^2", "w^3+w^2*2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn triangle_scan_distinguishes_graphs() {
    let out = run(&["graph", "scan-triangles", "--coeff-bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("triangles=0"), "{}", stdout(&out));

    let path = std::env::temp_dir().join("ordinal_ramsey_mutant_graph.txt");
    std::fs::write(&path, full_pair_mutant().to_text()).unwrap();
    let out = run(&[
        "graph",
        "scan-triangles",
        "--coeff-bound",
        "3",
        "--graph",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn obstruction_suite_exit_codes() {
    let out = run(&["verify", "claim2", "--theta", "w^3+w^2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all_resolved=true"), "{}", stdout(&out));

    // A universe outside the supported shape is a usage error, not a
    // falsification.
    let out = run(&["verify", "claim2", "--theta", "w^2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_input_exits_two_with_stderr_message() {
    let out = run(&["ord", "normalize", "w^2*0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:"), "{err}");
    assert!(err.contains("coefficient"), "{err}");
}

#[test]
fn json_mode_emits_one_object() {
    let out = run(&["--json", "ord", "layers", "w^3*2", "--coeff-bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["delta"], "w^3*2");
    assert!(value["lines"].as_array().is_some());
}

#[test]
fn antichain_verification_exit_codes() {
    let good = std::env::temp_dir().join("ordinal_ramsey_family_good.txt");
    std::fs::write(&good, "1 2\n1 3\n1 4\n1 5\n").unwrap();
    let out = run(&["verify", "antichain", "--file", good.to_str().unwrap(), "--count", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let nested = std::env::temp_dir().join("ordinal_ramsey_family_nested.txt");
    std::fs::write(&nested, "1 2\n1 2 3\n").unwrap();
    let out = run(&["verify", "antichain", "--file", nested.to_str().unwrap(), "--count", "2"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("falsified"), "{}", stdout(&out));
}

#[test]
fn staircase_build_and_reject() {
    let out = run(&["verify", "staircase", "--levels", "0,1", "--width", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("# shape k=2 w=2 levels=0,1"), "{}", stdout(&out));

    // A level subset bounded above is never large.
    let out = run(&["verify", "staircase", "--levels", "0", "--width", "2", "--set", "m<2"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("falsified"), "{}", stdout(&out));
}
