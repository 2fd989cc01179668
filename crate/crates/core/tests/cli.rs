use std::path::Path;
use std::process::{Command, Output};

fn gifaffect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gifaffect")).args(args).output().unwrap()
}

fn ok(args: &[&str]) {
    let out = gifaffect(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

fn build(dir: &Path) {
    let fx = s(&dir.join("fixture"));
    let reg = format!("{fx}/registry.txt");
    ok(&["--seed", "3", "synth", "--out", &fx, "--pairs", "120"]);
    ok(&["--registry", &reg, "build-dict", "--listings", &format!("{fx}/listings"), "--out", &s(&dir.join("dict.json"))]);
    ok(&[
        "label", "--pairs", &format!("{fx}/pairs.jsonl"), "--dict", &s(&dir.join("dict.json")),
        "--rules", &format!("{fx}/rules.json"), "--out", &s(&dir.join("labeled.jsonl")),
    ]);
}

#[test]
fn missing_dictionary_is_a_json_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    std::fs::write(dir.path().join("pairs.jsonl"), "").unwrap();
    let out = gifaffect(&[
        "label", "--pairs", &s(&dir.path().join("pairs.jsonl")), "--dict", &s(&missing), "--out", &s(&dir.path().join("o.jsonl")),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    assert!(v["error"].is_string());
    assert_eq!(v["path"], s(&missing));
}

#[test]
fn unknown_subcommand_exits_nonzero() {
    let out = gifaffect(&["frobnicate"]);
    assert!(!out.status.success());
    let line = String::from_utf8_lossy(&out.stderr).lines().last().unwrap().to_string();
    assert!(serde_json::from_str::<serde_json::Value>(&line).is_ok());
}

#[test]
fn labeling_is_idempotent_and_writes_a_run_report() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path());
    let first = std::fs::read(dir.path().join("labeled.jsonl")).unwrap();
    build(dir.path());
    assert_eq!(first, std::fs::read(dir.path().join("labeled.jsonl")).unwrap());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("labeled.jsonl.run.json")).unwrap()).unwrap();
    assert_eq!(report["command"], "label");
    let inputs = report["inputs"].as_array().unwrap();
    assert!(inputs.iter().all(|i| i["sha256"].as_str().map_or(false, |h| h.len() == 64)));
}

#[test]
fn public_export_drops_text() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path());
    let p = |n: &str| s(&dir.path().join(n));
    ok(&["export", "--dataset", &p("labeled.jsonl"), "--mode", "public", "--out", &p("public.jsonl")]);
    ok(&["export", "--dataset", &p("labeled.jsonl"), "--mode", "private", "--out", &p("private.jsonl")]);
    let public = std::fs::read_to_string(p("public.jsonl")).unwrap();
    let private = std::fs::read_to_string(p("private.jsonl")).unwrap();
    assert_eq!(public.lines().count(), private.lines().count());
    assert!(public.lines().count() > 0);
    for line in public.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("root_text").is_none());
    }
    assert!(private.lines().all(|l| l.contains("root_text")));
}

#[test]
fn newick_output_is_terminated() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path());
    let out = dir.path().join("tree.nwk");
    ok(&["cluster", "--dict", &s(&dir.path().join("dict.json")), "--out-dendrogram", &s(&out), "--format", "newick"]);
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.trim_end().ends_with(';'));
    assert!(text.starts_with('('));
}
