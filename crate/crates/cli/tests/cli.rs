//! End-to-end tests against the compiled binary: exit codes, report
//! determinism, and the committed fixture corpus.

use std::path::Path;
use std::process::{Command, Output};

fn ytri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ytri"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

/// Payload = report text without the trailing timing line.
fn payload(output: &Output) -> String {
    let text = stdout(output);
    text.lines()
        .filter(|line| !line.starts_with("timing_us = "))
        .map(|line| format!("{line}\n"))
        .collect()
}

#[test]
fn classify_exits_zero() {
    let out = ytri(&["classify", "(x^2+1)*y + 2*x ; (x^2+1)*y + x"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result.d_f = x^2 + 1"));
}

#[test]
fn decompose_inconclusive_exits_two() {
    let out = ytri(&["decompose", "x^3*y^2 + x ; x^3*y^2 + x + y"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_error_exits_one() {
    let out = ytri(&["classify", "y ; x^"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("column 6"));
}

#[test]
fn witness_is_definitive_success() {
    let out = ytri(&[
        "check-injectivity",
        "x ; y^2",
        "--budget",
        "1000",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result.status = not-injective"));
}

#[test]
fn eval_takes_exact_points() {
    let out = ytri(&["eval", "x^3*y^2 + x ; x^3*y^2 + x + y", "--at", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result.image = (5, 7)"));
}

#[test]
fn tree_format_indents() {
    let out = ytri(&["classify", "x ; y", "--format", "tree"]);
    assert!(stdout(&out).contains("result:\n  map_type = (0, 1)"));
}

#[test]
fn reports_are_byte_deterministic() {
    let args = [
        "check-injectivity",
        "(x^2+1)*y + 2*x ; (x^2+1)*y + x",
        "--budget",
        "3000",
        "--seed",
        "11",
    ];
    let first = payload(&ytri(&args));
    let second = payload(&ytri(&args));
    assert_eq!(first, second);
    assert!(!first.is_empty());
}

#[test]
fn committed_fixtures_reproduce() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut checked = 0;
    for (name, command) in ytri_cli::run::fixture_commands() {
        let expected_path = dir.join(format!("{name}.report"));
        let expected = std::fs::read_to_string(&expected_path)
            .unwrap_or_else(|e| panic!("fixture {name} unreadable: {e}"));
        let outcome = ytri_cli::run::execute(&command).expect("fixture command parses");
        let mut produced = outcome.report.render(ytri_cli::report::Format::Text);
        produced.push_str(&format!("exit = {}\n", outcome.exit));
        assert_eq!(produced, expected, "fixture {name} drifted");
        checked += 1;
    }
    assert!(checked >= 10, "fixture corpus unexpectedly small");
}

#[test]
fn exit_code_contract_over_fixture_corpus() {
    for (name, command) in ytri_cli::run::fixture_commands() {
        let outcome = ytri_cli::run::execute(&command).expect("fixture parses");
        match name {
            "decompose_quadratic_pair_fails" | "inject_quadratic_pair_inconclusive" => {
                assert_eq!(outcome.exit, 2, "fixture {name}")
            }
            _ => assert_eq!(outcome.exit, 0, "fixture {name}"),
        }
    }
}
