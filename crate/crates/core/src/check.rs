//! Whole-program checking: signatures are gathered from every file first,
//! then each module body, function clause and top-level expression is
//! checked against them.

use crate::ast::{FunctionClause, Item, Program, Type};
use crate::diagnostics::{sort_diagnostics, Code, Diagnostic};
use crate::env::{ModulePrefix, SignatureEnv, VarEnv};
use crate::parser::{parse_source, SyntaxError};
use crate::pattern::{check_pattern, PatternMode};
use crate::signatures::Collector;
use crate::synth::Synthesizer;
use crate::types::fits;

/// A named source text.
#[derive(Clone, Debug)]
pub struct SourceFile {
    pub name: String,
    pub text: String,
}

impl SourceFile {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        SourceFile {
            name: name.into(),
            text: text.into(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub sigs: SignatureEnv,
    /// Sorted by file, offset and code.
    pub diagnostics: Vec<Diagnostic>,
}

impl Report {
    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_warning())
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn has_syntax_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.code.is_syntax())
    }

    /// True when there are neither errors nor warnings.
    pub fn is_clean(&self) -> bool {
        self.diagnostics.iter().all(|d| !d.is_error() && !d.is_warning())
    }
}

pub fn syntax_diagnostic(err: &SyntaxError) -> Diagnostic {
    match err {
        SyntaxError::Lex(e) => Diagnostic::new(Code::E_LEX, e.span, e.message.clone()),
        SyntaxError::Parse(e) => Diagnostic::new(Code::E_PARSE, e.span, e.message.clone()),
    }
}

/// Checks one program on its own.
pub fn check_program(prog: &Program) -> Vec<Diagnostic> {
    check_programs(&[("", prog)]).diagnostics
}

/// Checks programs that share one signature environment.
pub fn check_programs(files: &[(&str, &Program)]) -> Report {
    let mut collector = Collector::new();
    for (name, prog) in files {
        collector.add_program(name, prog);
    }
    let (sigs, mut diagnostics) = collector.finish();
    for (name, prog) in files {
        let mut found = Vec::new();
        check_items(&sigs, &ModulePrefix::root(), &prog.items, &mut found);
        diagnostics.extend(found.into_iter().map(|d| d.in_file(*name)));
    }
    sort_diagnostics(&mut diagnostics);
    Report { sigs, diagnostics }
}

/// Parses and checks source files. Files that fail to parse contribute one
/// syntax diagnostic each and are otherwise skipped.
pub fn check_sources(files: &[SourceFile]) -> Report {
    let mut parsed = Vec::new();
    let mut syntax = Vec::new();
    for f in files {
        match parse_source(&f.text) {
            Ok(p) => parsed.push((f.name.as_str(), p)),
            Err(e) => syntax.push(syntax_diagnostic(&e).in_file(f.name.as_str())),
        }
    }
    let refs: Vec<(&str, &Program)> = parsed.iter().map(|(n, p)| (*n, p)).collect();
    let mut report = check_programs(&refs);
    report.diagnostics.extend(syntax);
    sort_diagnostics(&mut report.diagnostics);
    report
}

fn check_items(sigs: &SignatureEnv, prefix: &ModulePrefix, items: &[Item], out: &mut Vec<Diagnostic>) {
    for item in items {
        match item {
            Item::Module(m) => check_items(sigs, &prefix.child(&m.name), &m.body, out),
            Item::Spec(_) => {}
            Item::Def(def) => out.extend(check_function_clause(def, sigs, prefix)),
            Item::Expr(e) => {
                let mut s = Synthesizer::new(sigs, prefix);
                let _ = s.synth(e, &VarEnv::new());
                out.extend(s.diagnostics);
            }
        }
    }
}

/// Checks one `def` clause. Without a spec the clause is accepted as is;
/// with one, each parameter pattern must refine its declared type and the
/// body must fit the declared result.
pub fn check_function_clause(
    clause: &FunctionClause,
    sigs: &SignatureEnv,
    prefix: &ModulePrefix,
) -> Vec<Diagnostic> {
    let name = prefix.qualify(&clause.name);
    let arity = clause.params.len();
    let Some(Type::Fun(params, result)) = sigs.lookup(&name, arity) else {
        return vec![Diagnostic::new(
            Code::I_UNTYPED_DEF,
            clause.span,
            format!("`{name}/{arity}` has no @spec and is not checked"),
        )];
    };
    let mut out = Vec::new();
    let mut gamma = VarEnv::new();
    let mut params_ok = true;
    for (p, t) in clause.params.iter().zip(params) {
        match check_pattern(p, t, &VarEnv::new(), &gamma, PatternMode::Spec) {
            Ok(g) => gamma = g,
            Err(d) => {
                out.push(d);
                params_ok = false;
                for x in p.bound_vars() {
                    if !gamma.contains(x) {
                        gamma.insert(x, Type::Any);
                    }
                }
            }
        }
    }
    let mut s = Synthesizer::new(sigs, prefix);
    let body = s.synth(&clause.body, &gamma);
    out.extend(s.diagnostics);
    if let Some(r) = body {
        if params_ok && !fits(&r.ty, result) {
            out.push(
                Diagnostic::new(
                    Code::E_SPEC_BODY_MISMATCH,
                    clause.body.span,
                    format!("body of `{name}/{arity}` has type `{}` but the @spec promises `{result}`", r.ty),
                )
                .with_types((**result).clone(), r.ty),
            );
        }
    }
    out
}
