//! A gradual type checker for a small, statically analyzable fragment of
//! Elixir.
//!
//! Source text goes through [`lexer`] and [`parser`] into an [`ast`].
//! [`signatures`] gathers the `@spec` declarations of every file, and
//! [`check`] checks each module, function clause and expression against
//! them using the lattice in [`types`]. Problems come back as
//! [`diagnostics::Diagnostic`] values.
//!
//! ```
//! use exgrad::check::{check_sources, SourceFile};
//! use exgrad::diagnostics::Code;
//!
//! let report = check_sources(&[SourceFile::new("demo.ex", "3 + \"hi\"")]);
//! assert_eq!(report.diagnostics[0].code, Code::E_TYPE_MISMATCH);
//! ```

pub mod ast;
pub mod check;
pub mod cli;
pub mod diagnostics;
pub mod env;
pub mod lexer;
pub mod parser;
pub mod pattern;
pub mod pretty;
pub mod signatures;
pub mod span;
pub mod synth;
pub mod types;

pub use ast::{Expr, Pattern, Program, Type};
pub use check::{check_program, check_sources, Report, SourceFile};
pub use diagnostics::{Code, Diagnostic, Severity};
pub use env::{ModulePrefix, SignatureEnv, VarEnv};
pub use parser::{parse_expression, parse_source, parse_type};
pub use synth::{synthesize, CheckContext};
