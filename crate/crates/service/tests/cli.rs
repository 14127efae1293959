use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn rt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rt"))
        .args(args)
        .env_remove("RT_PROVIDER")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn index_then_suggest() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("sales.idx");
    let out = rt(&["index", fixture("sales.csv").to_str().unwrap(), "-o", idx.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("6 values"));

    let out = rt(&["suggest", idx.to_str().unwrap(), "profit for Onev", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["display_text"], "OneView");

    let out = rt(&["suggest", idx.to_str().unwrap(), "sales in A", "-k", "1"]);
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn ask_executes() {
    let out = rt(&[
        "ask",
        fixture("sales.csv").to_str().unwrap(),
        "What would be the average profit from selling OneView to Allianz in ANZ",
        "--execute",
        "--json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["answer"]["rows"], serde_json::json!([[15.0]]));
}

#[test]
fn unanswerable_question_fails() {
    let out = rt(&["ask", fixture("sales.csv").to_str().unwrap(), "tell me a joke"]);
    assert!(!out.status.success());
    assert!(stdout(&out).contains("no-query"));
}

#[test]
fn bench_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |report: &Path| {
        let out = rt(&[
            "bench",
            fixture("b2b_questions.jsonl").to_str().unwrap(),
            "--table",
            fixture("b2b_sales.csv").to_str().unwrap(),
            "--augment",
            "word_deletion,position_swap",
            "--report",
            report.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (out.stdout, std::fs::read(report).unwrap())
    };
    let a = run(&dir.path().join("a.json"));
    let b = run(&dir.path().join("b.json"));
    assert_eq!(a, b);
    let text = String::from_utf8(a.0).unwrap();
    assert!(text.contains("seed 42"));
    assert!(text.contains("+word_deletion"));
}

#[test]
fn missing_input_is_an_error() {
    let out = rt(&["index", "/nonexistent.csv", "-o", "/tmp/x.idx"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn config_file_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("rt.toml");
    std::fs::write(&cfg, "provder = \"mock\"\n").unwrap();
    let out = rt(&["--config", cfg.to_str().unwrap(), "ask", fixture("sales.csv").to_str().unwrap(), "x"]);
    assert!(!out.status.success());
}
