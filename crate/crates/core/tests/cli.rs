use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_delaycas"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn classify_matches_golden() {
    let (code, out, _) = run(&["classify", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(out, include_str!("golden/classify.json"));
}

#[test]
fn limit_matches_golden() {
    let (code, out, _) = run(&["limit", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(out, include_str!("golden/limit.json"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).0, 0);
    let (code, out, _) = run(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("delaycas "));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["classify", "--format", "yaml"]).0, 2);
    let (code, _, err) = run(&["classify", "--corpus", "/nonexistent/corpus.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));
}

#[test]
fn schema_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("version.json", r#"{"schema_version": 2, "entries": []}"#),
        ("unknown.json", r#"{"schema_version": 1, "entries": [], "extra": 1}"#),
        ("syntax.json", r#"{"schema_version": 1, "entries": ["#),
        (
            "expr.json",
            r#"{"schema_version": 1, "entries": [{"id": "x", "class": "pure-log-deriv", "a": "1/(", "b": "1"}]}"#,
        ),
    ] {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        let (code, _, err) = run(&["classify", "--corpus", p.to_str().unwrap()]);
        assert_eq!(code, 2, "{name}: {err}");
    }
}

#[test]
fn failed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    std::fs::write(
        &p,
        r#"{"schema_version": 1, "entries": [{"id": "x", "class": "pure-log-deriv", "a": "1", "b": "z", "expect_outcome": "ConsistentBranchA"}]}"#,
    )
    .unwrap();
    let (code, out, _) = run(&["classify", "--corpus", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));
}

#[test]
fn out_file_and_entry_filter() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let (code, out, _) = run(&[
        "cascade",
        "--entry",
        "w22-perturbed",
        "--format",
        "json",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["cascades"][0]["label"], "SimplePoleTail");
}

#[test]
fn demo_corpus_round_trips() {
    let (code, out, _) = run(&["demo-corpus"]);
    assert_eq!(code, 0);
    assert!(delaycas::cli::parse_corpus(&out).is_ok());
}
