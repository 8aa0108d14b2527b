use std::path::Path;
use std::process::{Command, Output};

fn exgrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exgrad"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("run exgrad")
}

fn text(b: &[u8]) -> String {
    String::from_utf8(b.to_vec()).unwrap()
}

#[test]
fn clean_file_is_silent() {
    let out = exgrad(&["check", "corpus/ok_arith.ex"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(out.stderr.is_empty());
}

#[test]
fn json_report_for_a_type_error() {
    let out = exgrad(&["check", "corpus/wrong_plus.ex", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("one JSON document");
    let diags = v["diagnostics"].as_array().expect("array of diagnostics");
    assert_eq!(diags.len(), 1);
    assert_eq!(v["summary"], serde_json::json!({"errors": 1, "warnings": 0}));
    assert_eq!(diags[0]["code"], "E_TYPE_MISMATCH");
    assert_eq!(diags[0]["severity"], "error");
    assert_eq!(diags[0]["expected"], "float");
    assert_eq!(diags[0]["actual"], "string");
    assert!(out.stderr.is_empty());
}

#[test]
fn text_report_shows_source_and_types() {
    let out = exgrad(&["check", "corpus/wrong_plus.ex", "--no-color"]);
    assert_eq!(out.status.code(), Some(1));
    let s = text(&out.stdout);
    assert!(s.contains("E_TYPE_MISMATCH"), "{s}");
    assert!(s.contains("3 + \"hi\""), "{s}");
    assert!(s.contains("^^^^"), "{s}");
    assert!(!s.contains('\u{1b}'), "no escapes with --no-color");
    assert_eq!(text(&out.stderr).trim(), "1 error, 0 warnings");
}

#[test]
fn errors_land_in_the_calling_file() {
    let out = exgrad(&["check", "corpus/multi/a.ex", "corpus/multi/b.ex", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let diags = v["diagnostics"].as_array().unwrap();
    assert_eq!(diags.len(), 1);
    assert!(diags[0]["file"].as_str().unwrap().ends_with("b.ex"));
    assert_eq!(diags[0]["line"], 2);
}

#[test]
fn directories_are_searched() {
    let out = exgrad(&["check", "corpus/multi"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stdout).contains("b.ex"));
}

#[test]
fn warnings_fail_only_when_strict() {
    let lax = exgrad(&["check", "corpus/case_atoms.ex"]);
    assert_eq!(lax.status.code(), Some(0));
    assert!(text(&lax.stdout).contains("W_UNREACHABLE_PATTERN"));
    let strict = exgrad(&["check", "corpus/case_atoms.ex", "--strict-warnings"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn syntax_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ex");
    std::fs::write(&bad, "def f(x do x end").unwrap();
    let out = exgrad(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stdout).contains("E_PARSE"));

    // a syntax error wins over type errors elsewhere
    let out = exgrad(&["check", bad.to_str().unwrap(), "corpus/wrong_plus.ex"]);
    assert_eq!(out.status.code(), Some(2));

    let out = exgrad(&["parse", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("E_PARSE"));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(exgrad(&[]).status.code(), Some(3));
    assert_eq!(exgrad(&["check"]).status.code(), Some(3));
    assert_eq!(exgrad(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(exgrad(&["check", "corpus/nope.ex"]).status.code(), Some(3));
    assert_eq!(exgrad(&["check", "--format", "yaml", "corpus"]).status.code(), Some(3));
}

#[test]
fn help_and_version() {
    let out = exgrad(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("check"));
    let out = exgrad(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn dump_sigs() {
    let out = exgrad(&["check", "corpus/multi/a.ex", "--dump-sigs"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(text(&out.stdout).trim(), "Shared.double/1 :: (integer) -> integer");

    // JSON mode keeps stdout a single document
    let out = exgrad(&["check", "corpus/multi/a.ex", "--dump-sigs", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["diagnostics"], serde_json::json!([]));
    assert!(text(&out.stderr).contains("Shared.double/1"));
}

#[test]
fn parse_dumps_the_tree() {
    let out = exgrad(&["parse", "corpus/scope.ex"]);
    assert_eq!(out.status.code(), Some(0));
    let s = text(&out.stdout);
    assert!(s.contains("Program") && s.contains("Match"), "{s}");
}

#[test]
fn whole_corpus_is_deterministic() {
    assert!(Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").is_dir());
    for format in ["text", "json"] {
        let a = exgrad(&["check", "corpus", "--format", format]);
        let b = exgrad(&["check", "corpus", "--format", format]);
        assert_eq!(a.status.code(), Some(1));
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stderr, b.stderr);
    }
}
