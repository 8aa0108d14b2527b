//! The `exgrad` command line.
//!
//! ```text
//! exgrad check <paths...> [--format text|json] [--strict-warnings] [--dump-sigs] [--no-color]
//! exgrad parse <path>
//! ```
//!
//! Exit codes: 0 clean, 1 type errors (or warnings under
//! `--strict-warnings`), 2 syntax errors, 3 usage errors and unreadable
//! paths.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::check::{check_sources, syntax_diagnostic, SourceFile};
use crate::diagnostics::{render_json, render_text_styled, Severity, Summary};
use crate::parser::parse_source;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TYPE_ERRORS: i32 = 1;
pub const EXIT_SYNTAX_ERRORS: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "exgrad", version, about = "Gradual type checker for an Elixir fragment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type-check files and directories (directories are searched for `*.ex`)
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Treat warnings as errors
        #[arg(long)]
        strict_warnings: bool,
        /// Print the collected signatures
        #[arg(long)]
        dump_sigs: bool,
        #[arg(long)]
        no_color: bool,
    },
    /// Print the syntax tree of one file
    Parse { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Runs the command line with `args` (including the program name) and
/// returns the exit code. Color is never used on these writers.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_color(args, stdout, stderr, false)
}

pub fn run_with_color<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            // --help and --version
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match cli.command {
        Command::Check {
            paths,
            format,
            strict_warnings,
            dump_sigs,
            no_color,
        } => check(
            &paths,
            format,
            strict_warnings,
            dump_sigs,
            color && !no_color,
            stdout,
            stderr,
        ),
        Command::Parse { path } => parse(&path, stdout, stderr),
    }
}

/// Expands directories to their `*.ex` files, recursively and sorted.
pub fn expand_paths(paths: &[PathBuf]) -> std::io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found = Vec::new();
            walk(p, &mut found)?;
            found.sort();
            out.extend(found);
        } else if p.exists() {
            out.push(p.clone());
        } else {
            return Err(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("{}: no such file or directory", p.display()),
            ));
        }
    }
    Ok(out)
}

fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            walk(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "ex") {
            out.push(path);
        }
    }
    Ok(())
}

fn read_sources(paths: &[PathBuf], stderr: &mut dyn Write) -> Option<Vec<SourceFile>> {
    let files = match expand_paths(paths) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(stderr, "exgrad: {e}");
            return None;
        }
    };
    let mut sources = Vec::with_capacity(files.len());
    for f in files {
        match std::fs::read_to_string(&f) {
            Ok(text) => sources.push(SourceFile::new(f.display().to_string(), text)),
            Err(e) => {
                let _ = writeln!(stderr, "exgrad: cannot read {}: {e}", f.display());
                return None;
            }
        }
    }
    Some(sources)
}

fn check(
    paths: &[PathBuf],
    format: Format,
    strict_warnings: bool,
    dump_sigs: bool,
    color: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let Some(sources) = read_sources(paths, stderr) else {
        return EXIT_USAGE;
    };
    let report = check_sources(&sources);

    if dump_sigs {
        // keep stdout a single JSON document in JSON mode
        let sink: &mut dyn Write = match format {
            Format::Text => stdout,
            Format::Json => stderr,
        };
        for line in report.sigs.dump() {
            let _ = writeln!(sink, "{line}");
        }
    }

    let summary = Summary::of(&report.diagnostics);
    match format {
        Format::Json => {
            let _ = writeln!(stdout, "{}", render_json(&report.diagnostics));
        }
        Format::Text => {
            let texts: BTreeMap<&str, &str> = sources
                .iter()
                .map(|s| (s.name.as_str(), s.text.as_str()))
                .collect();
            for d in report.diagnostics.iter().filter(|d| d.severity != Severity::Info) {
                let src = texts.get(d.file.as_str()).copied().unwrap_or("");
                let _ = write!(stdout, "{}", render_text_styled(d, src, color));
            }
            if summary.errors + summary.warnings > 0 {
                let _ = writeln!(stderr, "{summary}");
            }
        }
    }

    if report.has_syntax_errors() {
        EXIT_SYNTAX_ERRORS
    } else if summary.errors > 0 || (strict_warnings && summary.warnings > 0) {
        EXIT_TYPE_ERRORS
    } else {
        EXIT_OK
    }
}

fn parse(path: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "exgrad: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    match parse_source(&text) {
        Ok(prog) => {
            let _ = writeln!(stdout, "{prog:#?}");
            EXIT_OK
        }
        Err(e) => {
            let d = syntax_diagnostic(&e).in_file(path.display().to_string());
            let _ = write!(stderr, "{}", render_text_styled(&d, &text, false));
            EXIT_SYNTAX_ERRORS
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_3() {
        assert_eq!(run_args(&["exgrad"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["exgrad", "check"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["exgrad", "check", "x.ex", "--format", "xml"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["exgrad", "check", "/definitely/not/here.ex"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_args(&["exgrad", "--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("check"));
    }
}
