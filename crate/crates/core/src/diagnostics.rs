//! Diagnostic values and their text and JSON renderings.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::ast::Type;
use crate::span::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

macro_rules! codes {
    ($($name:ident => $sev:ident),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        #[allow(non_camel_case_types)]
        pub enum Code {
            $($name,)*
        }

        impl Code {
            pub const ALL: &'static [Code] = &[$(Code::$name,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Code::$name => stringify!($name),)*
                }
            }

            pub fn severity(self) -> Severity {
                match self {
                    $(Code::$name => Severity::$sev,)*
                }
            }
        }
    };
}

codes! {
    E_PARSE => Error,
    E_LEX => Error,
    E_DUP_SPEC => Error,
    E_TYPE_MISMATCH => Error,
    E_UNBOUND_VAR => Error,
    E_UNKNOWN_KEY => Error,
    E_ARITY => Error,
    E_NOT_FUNCTION => Error,
    E_PATTERN_TYPE => Error,
    E_NONLINEAR_MISMATCH => Error,
    E_PIN_UNBOUND => Error,
    E_SPEC_PARAM_MISMATCH => Error,
    E_SPEC_BODY_MISMATCH => Error,
    W_SPEC_NO_DEF => Warning,
    W_UNREACHABLE_PATTERN => Warning,
    I_UNTYPED_DEF => Info,
}

impl Code {
    pub fn parse(s: &str) -> Option<Code> {
        Code::ALL.iter().copied().find(|c| c.as_str() == s)
    }

    pub fn is_syntax(self) -> bool {
        matches!(self, Code::E_PARSE | Code::E_LEX)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Note {
    pub span: Span,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub file: String,
    pub span: Span,
    pub notes: Vec<Note>,
    pub expected: Option<Type>,
    pub actual: Option<Type>,
}

impl Diagnostic {
    pub fn new(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: code.severity(),
            code,
            message: message.into(),
            file: String::new(),
            span,
            notes: Vec::new(),
            expected: None,
            actual: None,
        }
    }

    /// A diagnostic about a type that does not fit where it is used.
    pub fn mismatch(code: Code, span: Span, expected: &Type, actual: &Type) -> Self {
        Diagnostic::new(code, span, format!("expected `{expected}`, found `{actual}`"))
            .with_types(expected.clone(), actual.clone())
    }

    pub fn with_types(mut self, expected: Type, actual: Type) -> Self {
        self.expected = Some(expected);
        self.actual = Some(actual);
        self
    }

    pub fn with_note(mut self, span: Span, message: impl Into<String>) -> Self {
        self.notes.push(Note {
            span,
            message: message.into(),
        });
        self
    }

    pub fn in_file(mut self, file: impl Into<String>) -> Self {
        self.file = file.into();
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    pub fn is_warning(&self) -> bool {
        self.severity == Severity::Warning
    }
}

/// Puts diagnostics in output order: by file, then start offset, then code.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        (a.file.as_str(), a.span.start, a.code).cmp(&(b.file.as_str(), b.span.start, b.code))
    });
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub errors: usize,
    pub warnings: usize,
}

impl Summary {
    pub fn of(diags: &[Diagnostic]) -> Summary {
        Summary {
            errors: diags.iter().filter(|d| d.is_error()).count(),
            warnings: diags.iter().filter(|d| d.is_warning()).count(),
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plural = |n: usize| if n == 1 { "" } else { "s" };
        write!(
            f,
            "{} error{}, {} warning{}",
            self.errors,
            plural(self.errors),
            self.warnings,
            plural(self.warnings)
        )
    }
}

/// Renders one diagnostic for a terminal:
///
/// ```text
/// demo.ex:1:1 E_TYPE_MISMATCH expected `float`, found `string`
///   |
/// 1 | 3 + "hi"
///   |     ^^^^
///   = expected: float
///   = actual: string
/// ```
pub fn render_text(d: &Diagnostic, source: &str) -> String {
    render_text_styled(d, source, false)
}

pub fn render_text_styled(d: &Diagnostic, source: &str, color: bool) -> String {
    let mut out = String::new();
    let code = if color {
        let c = match d.severity {
            Severity::Error => "31",
            Severity::Warning => "33",
            Severity::Info => "36",
        };
        format!("\x1b[1;{c}m{}\x1b[0m", d.code)
    } else {
        d.code.to_string()
    };
    let _ = writeln!(
        out,
        "{}:{}:{} {} {}",
        d.file, d.span.line, d.span.col, code, d.message
    );
    excerpt(&mut out, d.span, source);
    if let Some(t) = &d.expected {
        let _ = writeln!(out, "  = expected: {t}");
    }
    if let Some(t) = &d.actual {
        let _ = writeln!(out, "  = actual: {t}");
    }
    for n in &d.notes {
        let _ = writeln!(out, "  = note: {}:{}: {}", n.span.line, n.span.col, n.message);
    }
    out
}

fn excerpt(out: &mut String, span: Span, source: &str) {
    let Some(text) = source.lines().nth(span.line.saturating_sub(1) as usize) else {
        return;
    };
    let gutter = span.line.to_string();
    let pad = " ".repeat(gutter.len());
    let multi = span.end_line > span.line;
    let _ = writeln!(out, "{pad} |");
    let _ = writeln!(
        out,
        "{gutter} | {text}{}",
        if multi { " ..." } else { "" }
    );
    let start = span.col.saturating_sub(1) as usize;
    let width = text.chars().count();
    let end = if multi {
        width
    } else {
        (span.end_col.saturating_sub(1) as usize).min(width)
    };
    let carets = end.saturating_sub(start).max(1);
    let _ = writeln!(out, "{pad} | {}{}", " ".repeat(start), "^".repeat(carets));
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    file: &'a str,
    line: u32,
    col: u32,
    end_line: u32,
    end_col: u32,
    severity: Severity,
    code: Code,
    message: &'a str,
    expected: Option<String>,
    actual: Option<String>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    diagnostics: Vec<JsonDiagnostic<'a>>,
    summary: Summary,
}

pub fn render_json(diags: &[Diagnostic]) -> String {
    let report = JsonReport {
        diagnostics: diags
            .iter()
            .map(|d| JsonDiagnostic {
                file: &d.file,
                line: d.span.line,
                col: d.span.col,
                end_line: d.span.end_line,
                end_col: d.span.end_col,
                severity: d.severity,
                code: d.code,
                message: &d.message,
                expected: d.expected.as_ref().map(Type::to_string),
                actual: d.actual.as_ref().map(Type::to_string),
            })
            .collect(),
        summary: Summary::of(diags),
    };
    serde_json::to_string_pretty(&report).expect("plain data serializes")
}
