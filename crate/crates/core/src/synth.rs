//! Type synthesis for expressions.
//!
//! [`synthesize`] computes a type for an expression together with the
//! variable environment in effect after it. Operands of one operator are
//! independent: each is checked in the environment the operator itself was
//! checked in, and their output environments are merged afterwards.

use crate::ast::{BinOp, Expr, ExprKind, Key, Pattern, Type, UnOp};
use crate::diagnostics::{Code, Diagnostic};
use crate::env::{qualified_name, ModulePrefix, SignatureEnv, VarEnv};
use crate::pattern::{check_case_pattern, check_pattern, natural_pattern_type, PatternMode};
use crate::span::Span;
use crate::types::{fits, join, literal_type};

#[derive(Clone, Debug)]
pub struct CheckContext<'a> {
    pub sigs: &'a SignatureEnv,
    pub prefix: &'a ModulePrefix,
    pub vars: VarEnv,
}

impl<'a> CheckContext<'a> {
    pub fn new(sigs: &'a SignatureEnv, prefix: &'a ModulePrefix) -> Self {
        CheckContext {
            sigs,
            prefix,
            vars: VarEnv::new(),
        }
    }

    pub fn with_vars(mut self, vars: VarEnv) -> Self {
        self.vars = vars;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthResult {
    pub ty: Type,
    pub env: VarEnv,
}

/// The outcome of synthesizing one expression: a result when it is well
/// typed, plus every diagnostic found along the way (warnings included).
#[derive(Clone, Debug, Default)]
pub struct Synthesis {
    pub result: Option<SynthResult>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Synthesis {
    pub fn ty(&self) -> Option<&Type> {
        self.result.as_ref().map(|r| &r.ty)
    }

    pub fn env(&self) -> Option<&VarEnv> {
        self.result.as_ref().map(|r| &r.env)
    }

    pub fn error_codes(&self) -> Vec<Code> {
        self.diagnostics
            .iter()
            .filter(|d| d.is_error())
            .map(|d| d.code)
            .collect()
    }
}

pub fn synthesize(e: &Expr, ctx: &CheckContext<'_>) -> Synthesis {
    let mut s = Synthesizer::new(ctx.sigs, ctx.prefix);
    let result = s.synth(e, &ctx.vars);
    Synthesis {
        result,
        diagnostics: s.diagnostics,
    }
}

/// Synthesis engine. `None` results mean the expression is ill typed and
/// the reason has been recorded in `diagnostics`.
pub struct Synthesizer<'a> {
    sigs: &'a SignatureEnv,
    prefix: &'a ModulePrefix,
    pub diagnostics: Vec<Diagnostic>,
}

type Out = Option<SynthResult>;

fn ok(ty: Type, env: VarEnv) -> Out {
    Some(SynthResult { ty, env })
}

fn list_of_term() -> Type {
    Type::list(Type::Term)
}

fn element_of(t: &Type) -> Type {
    match t {
        Type::List(e) => (**e).clone(),
        Type::Any => Type::Any,
        _ => Type::None,
    }
}

/// An `any` arithmetic operand stands for the other operand's numeric type,
/// or `float` when nothing better is known.
fn materialize_numeric(t: &Type, other: &Type) -> Type {
    match (t, other) {
        (Type::Any, Type::Integer | Type::Float) => other.clone(),
        (Type::Any, _) => Type::Float,
        _ => t.clone(),
    }
}

impl<'a> Synthesizer<'a> {
    pub fn new(sigs: &'a SignatureEnv, prefix: &'a ModulePrefix) -> Self {
        Synthesizer {
            sigs,
            prefix,
            diagnostics: Vec::new(),
        }
    }

    fn report(&mut self, d: Diagnostic) {
        self.diagnostics.push(d);
    }

    /// Records a mismatch unless `actual` fits `expected`.
    fn expect(&mut self, actual: &Type, expected: &Type, span: Span) -> bool {
        if fits(actual, expected) {
            true
        } else {
            self.report(Diagnostic::mismatch(Code::E_TYPE_MISMATCH, span, expected, actual));
            false
        }
    }

    /// Synthesizes independent siblings in the same environment. Returns
    /// their types and the merge of their output environments.
    fn siblings<'e>(
        &mut self,
        es: impl IntoIterator<Item = &'e Expr>,
        env: &VarEnv,
    ) -> Option<(Vec<Type>, VarEnv)> {
        let mut tys = Vec::new();
        let mut out = env.clone();
        let mut failed = false;
        for e in es {
            match self.synth(e, env) {
                Some(r) => {
                    tys.push(r.ty);
                    out.merge_in(&r.env);
                }
                None => failed = true,
            }
        }
        (!failed).then_some((tys, out))
    }

    pub fn synth(&mut self, e: &Expr, env: &VarEnv) -> Out {
        match &e.kind {
            ExprKind::Lit(l) => ok(literal_type(l), env.clone()),
            ExprKind::Var(x) => match env.get(x) {
                Some(t) => ok(t.clone(), env.clone()),
                None => {
                    self.report(Diagnostic::new(
                        Code::E_UNBOUND_VAR,
                        e.span,
                        format!("unbound variable `{x}`"),
                    ));
                    None
                }
            },
            ExprKind::Tuple(es) => {
                let (tys, out) = self.siblings(es, env)?;
                ok(Type::Tuple(tys), out)
            }
            ExprKind::EmptyList => ok(Type::list(Type::None), env.clone()),
            ExprKind::Cons(h, t) => {
                let (tys, out) = self.siblings([&**h, &**t], env)?;
                if !self.expect(&tys[1], &list_of_term(), t.span) {
                    return None;
                }
                ok(Type::list(join(&tys[0], &element_of(&tys[1]))), out)
            }
            ExprKind::Map(entries) => {
                let (tys, out) = self.siblings(entries.iter().map(|(_, v)| v), env)?;
                let t = Type::map(entries.iter().map(|(k, _)| k.clone()).zip(tys))
                    .expect("map literal keys are distinct");
                ok(t, out)
            }
            ExprKind::Access(m, k) => self.access(e, m, k, env),
            ExprKind::Binary(op, l, r) => self.binary(*op, l, r, env),
            ExprKind::Unary(op, x) => {
                let r = self.synth(x, env)?;
                match op {
                    UnOp::Neg => {
                        if !self.expect(&r.ty, &Type::Float, x.span) {
                            return None;
                        }
                        let t = if r.ty == Type::Any { Type::Float } else { r.ty };
                        ok(t, r.env)
                    }
                    UnOp::Not => {
                        if !self.expect(&r.ty, &Type::Boolean, x.span) {
                            return None;
                        }
                        ok(Type::Boolean, r.env)
                    }
                }
            }
            ExprKind::Match(p, rhs) => self.matching(p, rhs, env),
            ExprKind::Seq(first, rest) => {
                let next_env = match self.synth(first, env) {
                    Some(r) => r.env,
                    None => {
                        // keep going to report later statements, treating
                        // whatever the failed statement binds as unknown
                        let mut recovered = env.clone();
                        for x in statement_bindings(first) {
                            if !recovered.contains(x) {
                                recovered.insert(x, Type::Any);
                            }
                        }
                        let _ = self.synth(rest, &recovered);
                        return None;
                    }
                };
                self.synth(rest, &next_env)
            }
            ExprKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let c = self.synth(cond, env)?;
                let cond_ok = self.expect(&c.ty, &Type::Boolean, cond.span);
                let (tys, _) = self.siblings([&**then_branch, &**else_branch], &c.env)?;
                if !cond_ok {
                    return None;
                }
                ok(join(&tys[0], &tys[1]), c.env)
            }
            ExprKind::Case(selector, clauses) => {
                let s = self.synth(selector, env)?;
                let mut result: Option<Type> = None;
                let mut failed = false;
                for clause in clauses {
                    let bindings = match check_case_pattern(&clause.pattern, &s.ty, &s.env, &VarEnv::new()) {
                        Ok((bindings, warning)) => {
                            if let Some(w) = warning {
                                self.report(w);
                            }
                            bindings
                        }
                        Err(d) => {
                            self.report(d);
                            failed = true;
                            continue;
                        }
                    };
                    match self.synth(&clause.body, &s.env.merge(&bindings)) {
                        Some(r) => {
                            result = Some(match result {
                                Some(t) => join(&t, &r.ty),
                                None => r.ty,
                            })
                        }
                        None => failed = true,
                    }
                }
                if failed {
                    return None;
                }
                ok(result.expect("case has at least one clause"), s.env)
            }
            ExprKind::Cond(clauses) => {
                let mut result: Option<Type> = None;
                let mut failed = false;
                for clause in clauses {
                    let Some(c) = self.synth(&clause.cond, env) else {
                        failed = true;
                        continue;
                    };
                    if !self.expect(&c.ty, &Type::Boolean, clause.cond.span) {
                        failed = true;
                    }
                    match self.synth(&clause.body, &c.env) {
                        Some(r) => {
                            result = Some(match result {
                                Some(t) => join(&t, &r.ty),
                                None => r.ty,
                            })
                        }
                        None => failed = true,
                    }
                }
                if failed {
                    return None;
                }
                ok(result.expect("cond has at least one clause"), env.clone())
            }
            ExprKind::Call {
                qualifier,
                name,
                args,
            } => {
                let qualified = if qualifier.is_empty() {
                    self.prefix.qualify(name)
                } else {
                    qualified_name(qualifier, name)
                };
                let sig = self.sigs.lookup(&qualified, args.len()).cloned();
                let (tys, out) = self.siblings(args, env)?;
                match sig {
                    Some(Type::Fun(params, result)) => {
                        let mut good = true;
                        for ((t, p), a) in tys.iter().zip(&params).zip(args) {
                            good &= self.expect(t, p, a.span);
                        }
                        good.then_some(SynthResult { ty: *result, env: out })
                    }
                    // untyped function: anything goes, nothing is known
                    _ => ok(Type::Any, out),
                }
            }
            ExprKind::VarCall { var, args } => {
                let Some(ft) = env.get(var).cloned() else {
                    self.report(Diagnostic::new(
                        Code::E_UNBOUND_VAR,
                        e.span,
                        format!("unbound variable `{var}`"),
                    ));
                    return None;
                };
                let (tys, out) = self.siblings(args, env)?;
                match ft {
                    Type::Fun(params, result) => {
                        if params.len() != args.len() {
                            self.report(
                                Diagnostic::new(
                                    Code::E_ARITY,
                                    e.span,
                                    format!(
                                        "`{var}` takes {} argument{} but is called with {}",
                                        params.len(),
                                        if params.len() == 1 { "" } else { "s" },
                                        args.len()
                                    ),
                                )
                                .with_types(
                                    Type::Fun(params.clone(), result.clone()),
                                    Type::fun(tys, Type::Any),
                                ),
                            );
                            return None;
                        }
                        let mut good = true;
                        for ((t, p), a) in tys.iter().zip(&params).zip(args) {
                            good &= self.expect(t, p, a.span);
                        }
                        good.then_some(SynthResult { ty: *result, env: out })
                    }
                    Type::Any => ok(Type::Any, out),
                    Type::None => ok(Type::None, out),
                    other => {
                        self.report(
                            Diagnostic::new(
                                Code::E_NOT_FUNCTION,
                                e.span,
                                format!("`{var}` has type `{other}` and cannot be called"),
                            )
                            .with_types(
                                Type::fun(vec![Type::Any; args.len()], Type::Any),
                                other,
                            ),
                        );
                        None
                    }
                }
            }
            ExprKind::Fn { params, body } => {
                let mut bindings = VarEnv::new();
                let mut param_types = Vec::with_capacity(params.len());
                for p in params {
                    match natural_pattern_type(p, env) {
                        Ok((t, b)) => {
                            param_types.push(t);
                            bindings.merge_in(&b);
                        }
                        Err(d) => {
                            self.report(d);
                            return None;
                        }
                    }
                }
                let r = self.synth(body, &env.merge(&bindings))?;
                // parameters and body bindings stay inside the function
                ok(Type::fun(param_types, r.ty), env.clone())
            }
        }
    }

    fn access(&mut self, e: &Expr, m: &Expr, k: &Key, env: &VarEnv) -> Out {
        let r = self.synth(m, env)?;
        match &r.ty {
            Type::Map(entries) => match Type::map_get(entries, k) {
                Some(t) => ok(t.clone(), r.env),
                None => {
                    self.report(
                        Diagnostic::new(
                            Code::E_UNKNOWN_KEY,
                            e.span,
                            format!("key `{k}` is not in map type `{}`", r.ty),
                        )
                        .with_types(
                            Type::Map(vec![(k.clone(), Type::Term)]),
                            r.ty.clone(),
                        ),
                    );
                    None
                }
            },
            Type::Any => ok(Type::Any, r.env),
            Type::None => ok(Type::None, r.env),
            other => {
                self.report(Diagnostic::mismatch(
                    Code::E_TYPE_MISMATCH,
                    m.span,
                    &Type::Map(vec![(k.clone(), Type::Term)]),
                    other,
                ));
                None
            }
        }
    }

    fn binary(&mut self, op: BinOp, l: &Expr, r: &Expr, env: &VarEnv) -> Out {
        let (tys, out) = self.siblings([l, r], env)?;
        let (lt, rt) = (&tys[0], &tys[1]);
        let operand = match op {
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div => Some(Type::Float),
            BinOp::And | BinOp::Or => Some(Type::Boolean),
            BinOp::StrConcat => Some(Type::String),
            BinOp::ListConcat | BinOp::ListDiff => Some(list_of_term()),
            _ => None,
        };
        if let Some(expected) = operand {
            // evaluate both so that both operands get reported
            let a = self.expect(lt, &expected, l.span);
            let b = self.expect(rt, &expected, r.span);
            if !(a && b) {
                return None;
            }
        }
        let ty = match op {
            BinOp::Add | BinOp::Sub | BinOp::Mul => {
                join(&materialize_numeric(lt, rt), &materialize_numeric(rt, lt))
            }
            BinOp::Div => Type::Float,
            BinOp::And | BinOp::Or => Type::Boolean,
            BinOp::StrConcat => Type::String,
            BinOp::ListConcat | BinOp::ListDiff => {
                let t = join(&element_of(lt), &element_of(rt));
                Type::list(t)
            }
            _ => {
                debug_assert!(op.is_comparison());
                Type::Boolean
            }
        };
        ok(ty, out)
    }

    fn matching(&mut self, p: &Pattern, rhs: &Expr, env: &VarEnv) -> Out {
        let r = self.synth(rhs, env)?;
        match check_pattern(p, &r.ty, env, &VarEnv::new(), PatternMode::Match) {
            Ok(bindings) => ok(r.ty, r.env.merge(&bindings)),
            Err(d) => {
                self.report(d);
                None
            }
        }
    }
}

/// Variables a statement binds at its top level, for error recovery.
fn statement_bindings(e: &Expr) -> Vec<&str> {
    match &e.kind {
        ExprKind::Match(p, rhs) => {
            let mut vars = p.bound_vars();
            vars.extend(statement_bindings(rhs));
            vars
        }
        _ => Vec::new(),
    }
}
