//! The first pass: gathering `@spec` declarations into a [`SignatureEnv`].

use std::collections::BTreeSet;

use crate::ast::{Item, Program, SpecDecl};
use crate::diagnostics::{Code, Diagnostic};
use crate::env::{ModulePrefix, SigKey, SignatureEnv};

/// Collects the signatures of one program. Duplicate specs keep the first
/// declaration; a spec with no definition of the same name and arity gets
/// a warning.
pub fn collect_signatures(prog: &Program) -> (SignatureEnv, Vec<Diagnostic>) {
    let mut c = Collector::default();
    c.add_program("", prog);
    c.finish()
}

/// Accumulates signatures over several files so that one environment is
/// shared by all of them.
#[derive(Default)]
pub struct Collector {
    sigs: SignatureEnv,
    specs: Vec<(String, SigKey, SpecDecl)>,
    defs: BTreeSet<SigKey>,
    diagnostics: Vec<Diagnostic>,
}

impl Collector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_program(&mut self, file: &str, prog: &Program) {
        self.items(file, &ModulePrefix::root(), &prog.items);
    }

    fn items(&mut self, file: &str, prefix: &ModulePrefix, items: &[Item]) {
        for item in items {
            match item {
                Item::Module(m) => self.items(file, &prefix.child(&m.name), &m.body),
                Item::Spec(spec) => {
                    let arity = spec.params.len();
                    match self.sigs.add_signature(prefix, &spec.name, arity, spec.fn_type()) {
                        Ok(()) => {
                            let key = (prefix.qualify(&spec.name), arity);
                            self.specs.push((file.to_string(), key, spec.clone()));
                        }
                        Err(dup) => self.diagnostics.push(
                            Diagnostic::new(
                                Code::E_DUP_SPEC,
                                spec.span,
                                format!("duplicate @spec for `{}/{}`", dup.key.0, dup.key.1),
                            )
                            .in_file(file),
                        ),
                    }
                }
                Item::Def(def) => {
                    self.defs.insert((prefix.qualify(&def.name), def.params.len()));
                }
                Item::Expr(_) => {}
            }
        }
    }

    pub fn finish(mut self) -> (SignatureEnv, Vec<Diagnostic>) {
        for (file, key, spec) in &self.specs {
            if !self.defs.contains(key) {
                self.diagnostics.push(
                    Diagnostic::new(
                        Code::W_SPEC_NO_DEF,
                        spec.span,
                        format!("@spec for `{}/{}` has no matching def", key.0, key.1),
                    )
                    .in_file(file.as_str()),
                );
            }
        }
        (self.sigs, self.diagnostics)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Type;
    use crate::parser::parse_source;

    fn collect(src: &str) -> (SignatureEnv, Vec<Code>) {
        let (sigs, diags) = collect_signatures(&parse_source(src).unwrap());
        (sigs, diags.iter().map(|d| d.code).collect())
    }

    #[test]
    fn spec_inside_module_is_prefixed() {
        let (sigs, codes) = collect("defmodule M do\n@spec func(integer) :: float\ndef func(x) do x end\nend");
        assert!(codes.is_empty());
        assert_eq!(
            sigs.lookup("M.func", 1),
            Some(&Type::fun(vec![Type::Integer], Type::Float))
        );
    }

    #[test]
    fn untyped_functions_are_absent() {
        let src = "defmodule Base do\n defmodule Math do\n  def dec(x) do x - 1 end\n end\nend\n\
                   defmodule Main do\n def fact(0) do 1 end\n def fact(n) do n * fact(n - 1) end\nend";
        let (sigs, codes) = collect(src);
        assert!(sigs.is_empty() && codes.is_empty());
    }

    #[test]
    fn nested_modules_compose_prefixes() {
        let (sigs, _) = collect("defmodule Base do defmodule Math do @spec f(atom) :: atom\ndef f(a) do a end end end");
        assert!(sigs.contains("Base.Math.f", 1));
    }

    #[test]
    fn duplicates_keep_the_first() {
        let (sigs, codes) = collect(
            "defmodule M do\n@spec func(integer) :: float\n@spec func(string) :: float\ndef func(x) do 1.0 end\nend",
        );
        assert_eq!(codes, vec![Code::E_DUP_SPEC]);
        assert_eq!(
            sigs.lookup("M.func", 1),
            Some(&Type::fun(vec![Type::Integer], Type::Float))
        );
    }

    #[test]
    fn spec_without_def_warns() {
        let (_, codes) = collect("defmodule M do\n@spec ghost(integer) :: integer\ndef ghost(a, b) do a end\nend");
        assert_eq!(codes, vec![Code::W_SPEC_NO_DEF]);
    }

    #[test]
    fn collection_ignores_expressions() {
        let (a, _) = collect("@spec f(integer) :: integer\ndef f(x) do x end");
        let (b, _) = collect("@spec f(integer) :: integer\nz = 1 + :oops\ndef f(x) do x end\n[1, 2]");
        assert_eq!(a, b);
    }
}
