//! The annotated corpus under `corpus/`.
//!
//! A trailing `# expect: CODE[, CODE]` comment says that diagnostics with
//! those codes start on that line; every error or warning must be
//! announced this way. A trailing `# type: T` comment says that the
//! top-level statement starting on that line synthesizes `T`, given the
//! statements before it.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use exgrad::ast::{Expr, ExprKind, Item, Type};
use exgrad::check::{check_sources, Report, SourceFile};
use exgrad::cli::expand_paths;
use exgrad::{parse_source, parse_type, synthesize, CheckContext, Code, ModulePrefix, SignatureEnv};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Corpus files in sorted order, named relative to the corpus directory.
pub fn corpus() -> Vec<SourceFile> {
    let dir = corpus_dir();
    expand_paths(std::slice::from_ref(&dir))
        .expect("corpus directory")
        .into_iter()
        .map(|p| {
            let name = p.strip_prefix(&dir).unwrap().display().to_string();
            SourceFile::new(name, std::fs::read_to_string(&p).unwrap())
        })
        .collect()
}

fn trailing<'a>(line: &'a str, tag: &str) -> Option<&'a str> {
    line.find(tag).map(|i| line[i + tag.len()..].trim())
}

/// `(line, code)` pairs announced by `# expect:` comments.
pub fn expected_codes(src: &SourceFile) -> BTreeSet<(u32, Code)> {
    let mut out = BTreeSet::new();
    for (i, line) in src.text.lines().enumerate() {
        if let Some(rest) = trailing(line, "# expect:") {
            for c in rest.split(',') {
                let code = Code::parse(c.trim()).unwrap_or_else(|| panic!("{}: unknown code {c}", src.name));
                out.insert((i as u32 + 1, code));
            }
        }
    }
    out
}

/// `(line, code)` pairs actually reported for `file`, info notes excluded.
pub fn reported_codes(report: &Report, file: &str) -> BTreeSet<(u32, Code)> {
    report
        .diagnostics
        .iter()
        .filter(|d| d.file == file && (d.is_error() || d.is_warning()))
        .map(|d| (d.span.line, d.code))
        .collect()
}

pub fn expected_types(src: &SourceFile) -> Vec<(u32, Type)> {
    src.text
        .lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let t = trailing(line, "# type:")?;
            let ty = parse_type(t).unwrap_or_else(|e| panic!("{}:{}: {e}", src.name, i + 1));
            Some((i as u32 + 1, ty))
        })
        .collect()
}

fn statements(e: &Expr, out: &mut Vec<Expr>) {
    match &e.kind {
        ExprKind::Seq(a, b) => {
            out.push((**a).clone());
            statements(b, out);
        }
        _ => out.push(e.clone()),
    }
}

/// The type synthesized for the top-level statement starting on `line`,
/// checked together with the statements before it in the same block.
pub fn statement_type(src: &SourceFile, sigs: &SignatureEnv, line: u32) -> Result<Option<Type>, String> {
    let prog = parse_source(&src.text).map_err(|e| e.to_string())?;
    for item in &prog.items {
        let Item::Expr(e) = item else { continue };
        let mut stmts = Vec::new();
        statements(e, &mut stmts);
        let Some(pos) = stmts.iter().position(|s| s.span.line == line) else {
            continue;
        };
        let mut prefix = stmts[pos].clone();
        for s in stmts[..pos].iter().rev() {
            let span = s.span.to(prefix.span);
            prefix = Expr::new(ExprKind::Seq(Box::new(s.clone()), Box::new(prefix)), span);
        }
        let root = ModulePrefix::root();
        let result = synthesize(&prefix, &CheckContext::new(sigs, &root));
        return Ok(result.ty().cloned());
    }
    Err(format!("{}:{line}: no top-level statement starts here", src.name))
}

/// Every disagreement between the corpus annotations and the checker.
pub fn corpus_mismatches(files: &[SourceFile]) -> Vec<String> {
    let report = check_sources(files);
    let mut bad = Vec::new();
    for f in files {
        let want = expected_codes(f);
        let got = reported_codes(&report, &f.name);
        for (line, code) in want.difference(&got) {
            bad.push(format!("{}:{line}: expected {code} was not reported", f.name));
        }
        for (line, code) in got.difference(&want) {
            bad.push(format!("{}:{line}: unexpected {code}", f.name));
        }
        for (line, ty) in expected_types(f) {
            match statement_type(f, &report.sigs, line) {
                Ok(Some(t)) if t == ty => {}
                Ok(Some(t)) => bad.push(format!("{}:{line}: type `{t}`, expected `{ty}`", f.name)),
                Ok(None) => bad.push(format!("{}:{line}: rejected, expected `{ty}`", f.name)),
                Err(e) => bad.push(e),
            }
        }
    }
    bad
}

/// Removes every `@spec`, including those inside modules.
pub fn erase_specs(items: &mut Vec<Item>) {
    items.retain(|i| !matches!(i, Item::Spec(_)));
    for i in items {
        if let Item::Module(m) = i {
            erase_specs(&mut m.body);
        }
    }
}

pub fn count_annotations(files: &[SourceFile]) -> (usize, usize) {
    files.iter().fold((0, 0), |(c, t), f| {
        (c + expected_codes(f).len(), t + expected_types(f).len())
    })
}
