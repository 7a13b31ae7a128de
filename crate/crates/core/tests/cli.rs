use std::fs;
use std::process::{Command, Output};

fn qbaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbaf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_reports_counts() {
    let out = qbaf(&["validate", "fakenews"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "ok: 8 arguments, 5 attacks, 2 supports\n");
}

#[test]
fn validate_rejects_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_temp(
        &dir,
        "cycle.json",
        r#"{"arguments": [{"id": "A", "base_score": 0.5}, {"id": "B", "base_score": 0.5}],
            "attacks": [["A", "B"]], "supports": [["B", "A"]]}"#,
    );
    let out = qbaf(&["validate", &file]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("cyclic: A -> B -> A"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn positioned_errors_reach_the_user() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_temp(
        &dir,
        "bad.json",
        r#"{"arguments": [{"id": "A", "base_score": 0.5}, {"id": "B", "base_score": 1.5}]}"#,
    );
    let out = qbaf(&["validate", &file]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("arguments[1].base_score"));
}

#[test]
fn missing_file_is_a_domain_error() {
    let out = qbaf(&["eval", "no-such-file.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no-such-file.json"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qbaf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qbaf(&["attribute"]).status.code(), Some(2));
    assert_eq!(
        qbaf(&["attribute", "fakenews", "--method", "guess"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qbaf(&["fixtures", "--list", "--emit", "movie"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qbaf(&["--help"]).status.code(), Some(0));
}

#[test]
fn eval_prints_topological_order() {
    let out = qbaf(&["eval", "running"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let ids: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(ids, ["B", "C", "D", "F", "G", "A"]);
    let a = text.lines().last().unwrap();
    assert_eq!(
        a.split_whitespace().collect::<Vec<_>>(),
        ["A", "0.37500", "0.37500", "0.12500"]
    );
}

#[test]
fn rank_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = qbaf(&[
        "rank",
        "movie",
        "--topic",
        "m",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    assert_eq!(csv, stdout(&qbaf(&["rank", "movie"])));
    let last = csv.lines().last().unwrap();
    assert!(
        last.starts_with("f_W,0.02000,0.85194,0.00420,-0.21000,"),
        "{last}"
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["rank", "fakenews"][..],
        &["check", "cx-agree"],
        &["export-dot", "movie"],
        &["attribute", "running", "--method", "fd"],
    ] {
        let first = qbaf(args);
        let second = qbaf(args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(first.stderr, second.stderr, "{args:?}");
    }
}

#[test]
fn check_fails_only_on_guaranteed_failures() {
    let out = qbaf(&["check", "fakenews", "--topic", "A"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 fail under direct or indirect connectivity"));

    let out = qbaf(&["check", "cx-invar"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out)
        .lines()
        .any(|l| l.starts_with("counterfactuality") && l.contains("FAILS")));

    let dir = tempfile::tempdir().unwrap();
    let file = write_temp(
        &dir,
        "kink.json",
        r#"{"topic": "A",
            "arguments": [{"id": "A", "base_score": 0.8}, {"id": "B", "base_score": 0.6}, {"id": "C", "base_score": 0.3}],
            "attacks": [["B", "A"]], "supports": [["C", "A"]]}"#,
    );
    let out = qbaf(&["check", &file]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[direct]"));
}

#[test]
fn export_dot_draws_attributions() {
    let out = qbaf(&["export-dot", "fakenews", "--topic", "A"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph qbaf {"));
    assert!(dot.contains("\"C\" -> \"A\" [style=dashed, color=blue"));
    assert!(dot.contains("\"D\" -> \"A\" [style=dashed, color=red, penwidth=5.000"));
}

#[test]
fn fixtures_list_and_emit() {
    let out = qbaf(&["fixtures", "--list"]);
    let names: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(
        names,
        [
            "running",
            "fakenews",
            "movie",
            "cx-complete",
            "cx-agree",
            "cx-invar",
            "fraud-reference"
        ]
    );
    let dir = tempfile::tempdir().unwrap();
    let emitted = stdout(&qbaf(&["fixtures", "--emit", "cx-agree"]));
    let file = write_temp(&dir, "cx-agree.json", &emitted);
    assert_eq!(
        stdout(&qbaf(&["attribute", &file])),
        stdout(&qbaf(&["attribute", "cx-agree"]))
    );
    assert_eq!(qbaf(&["fixtures", "--emit", "nope"]).status.code(), Some(1));
}

#[test]
fn reference_table_is_not_evaluable() {
    assert_eq!(
        qbaf(&["reference", "fraud-reference"]).status.code(),
        Some(0)
    );
    let out = qbaf(&["attribute", "fraud-reference"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot be evaluated"));
}
