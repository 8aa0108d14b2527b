//! Pattern typing.
//!
//! A pattern is checked against the type of the value it will be matched
//! with. The three places patterns occur relate the literal types to that
//! type in different directions, selected by [`PatternMode`].

use crate::ast::{Pattern, PatternKind, Type};
use crate::diagnostics::{Code, Diagnostic};
use crate::env::VarEnv;
use crate::types::{fits, is_more_precise, join, literal_type};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternMode {
    /// `p = e`: the value's type must be usable at the literal's type.
    Match,
    /// `case` clauses: the pattern's type must be usable at the selector type.
    Case,
    /// `def` parameters against a `@spec`: the pattern refines the declared
    /// type.
    Spec,
}

/// Checks `p` against `expected`, extending `gamma` with the bindings it
/// makes. `sigma` is the surrounding scope, consulted by pins only.
pub fn check_pattern(
    p: &Pattern,
    expected: &Type,
    sigma: &VarEnv,
    gamma: &VarEnv,
    mode: PatternMode,
) -> Result<VarEnv, Diagnostic> {
    let mut out = gamma.clone();
    Walk { sigma, mode }.check(p, expected, &mut out)?;
    Ok(out)
}

/// Checks a `case` clause pattern. A structural mismatch is retried with
/// the selector widened to `term`; if that succeeds the clause can never
/// match, so a warning is returned with the bindings.
pub fn check_case_pattern(
    p: &Pattern,
    selector: &Type,
    sigma: &VarEnv,
    gamma: &VarEnv,
) -> Result<(VarEnv, Option<Diagnostic>), Diagnostic> {
    match check_pattern(p, selector, sigma, gamma, PatternMode::Case) {
        Ok(env) => Ok((env, None)),
        Err(e) if falls_back(e.code) => {
            let (env, warning) = case_fallback(p, selector, sigma, gamma)?;
            Ok((env, Some(warning)))
        }
        Err(e) => Err(e),
    }
}

fn falls_back(code: Code) -> bool {
    matches!(
        code,
        Code::E_PATTERN_TYPE | Code::E_UNKNOWN_KEY | Code::E_NONLINEAR_MISMATCH
    )
}

/// Re-checks `p` against `term`, returning the bindings and an
/// unreachable-pattern warning.
pub fn case_fallback(
    p: &Pattern,
    selector: &Type,
    sigma: &VarEnv,
    gamma: &VarEnv,
) -> Result<(VarEnv, Diagnostic), Diagnostic> {
    let env = check_pattern(p, &Type::Term, sigma, gamma, PatternMode::Case)?;
    let warning = Diagnostic::new(
        Code::W_UNREACHABLE_PATTERN,
        p.span,
        format!("this pattern can never match a value of type `{selector}`"),
    )
    .with_types(selector.clone(), shape_type(p));
    Ok((env, warning))
}

/// The type a parameter pattern of an anonymous function stands for, and
/// the bindings it makes. Variables and wildcards are `any`.
pub fn natural_pattern_type(p: &Pattern, sigma: &VarEnv) -> Result<(Type, VarEnv), Diagnostic> {
    let mut env = VarEnv::new();
    let t = natural(p, sigma, &mut env)?;
    Ok((t, env))
}

fn natural(p: &Pattern, sigma: &VarEnv, env: &mut VarEnv) -> Result<Type, Diagnostic> {
    Ok(match &p.kind {
        PatternKind::Wildcard => Type::Any,
        PatternKind::Var(x) => {
            env.insert(x.clone(), Type::Any);
            Type::Any
        }
        PatternKind::Lit(l) => literal_type(l),
        PatternKind::Pin(x) => match sigma.get(x) {
            Some(t) => t.clone(),
            None => return Err(pin_unbound(p, x)),
        },
        PatternKind::Tuple(ps) => Type::Tuple(
            ps.iter()
                .map(|q| natural(q, sigma, env))
                .collect::<Result<_, _>>()?,
        ),
        PatternKind::EmptyList => Type::list(Type::Any),
        PatternKind::Cons(h, t) => {
            let head = natural(h, sigma, env)?;
            let tail = natural(t, sigma, env)?;
            Type::list(join(&head, &element_type(&tail)))
        }
        PatternKind::Map(entries) => Type::map(
            entries
                .iter()
                .map(|(k, q)| Ok((k.clone(), natural(q, sigma, env)?)))
                .collect::<Result<Vec<_>, Diagnostic>>()?,
        )
        .expect("pattern keys are distinct"),
    })
}

fn element_type(t: &Type) -> Type {
    match t {
        Type::List(e) => (**e).clone(),
        Type::Any => Type::Any,
        Type::None => Type::None,
        _ => Type::Term,
    }
}

/// The pattern read as a type, with variables, wildcards and pins as `any`.
/// Used to describe a pattern in messages.
pub fn shape_type(p: &Pattern) -> Type {
    match &p.kind {
        PatternKind::Wildcard | PatternKind::Var(_) | PatternKind::Pin(_) => Type::Any,
        PatternKind::Lit(l) => literal_type(l),
        PatternKind::Tuple(ps) => Type::Tuple(ps.iter().map(shape_type).collect()),
        PatternKind::EmptyList => Type::list(Type::Any),
        PatternKind::Cons(h, t) => Type::list(join(&shape_type(h), &element_type(&shape_type(t)))),
        PatternKind::Map(es) => {
            Type::map(es.iter().map(|(k, q)| (k.clone(), shape_type(q)))).expect("distinct keys")
        }
    }
}

fn pin_unbound(p: &Pattern, x: &str) -> Diagnostic {
    Diagnostic::new(
        Code::E_PIN_UNBOUND,
        p.span,
        format!("pinned variable `{x}` is not bound"),
    )
}

struct Walk<'a> {
    sigma: &'a VarEnv,
    mode: PatternMode,
}

impl Walk<'_> {
    fn mismatch(&self, p: &Pattern, expected: &Type) -> Diagnostic {
        let code = match self.mode {
            PatternMode::Spec => Code::E_SPEC_PARAM_MISMATCH,
            PatternMode::Match | PatternMode::Case => Code::E_PATTERN_TYPE,
        };
        let actual = shape_type(p);
        Diagnostic::new(
            code,
            p.span,
            format!("pattern of type `{actual}` cannot match a value of type `{expected}`"),
        )
        .with_types(expected.clone(), actual)
    }

    /// What the sub-positions of a structured pattern are checked against
    /// when the expected type is not itself structured, or `None` when the
    /// pattern cannot match at all.
    fn uniform(&self, expected: &Type) -> Option<Type> {
        match (expected, self.mode) {
            (Type::Any, _) => Some(Type::Any),
            (Type::Term, PatternMode::Case) => Some(Type::Term),
            (Type::None, PatternMode::Match) => Some(Type::None),
            _ => None,
        }
    }

    fn check(&self, p: &Pattern, expected: &Type, env: &mut VarEnv) -> Result<(), Diagnostic> {
        match &p.kind {
            PatternKind::Wildcard => Ok(()),
            PatternKind::Var(x) => match env.get(x) {
                None => {
                    env.insert(x.clone(), expected.clone());
                    Ok(())
                }
                Some(bound) if bound == expected => Ok(()),
                Some(bound) => Err(Diagnostic::new(
                    Code::E_NONLINEAR_MISMATCH,
                    p.span,
                    format!(
                        "`{x}` is already bound to `{bound}` in this pattern but appears again at `{expected}`"
                    ),
                )
                .with_types(bound.clone(), expected.clone())),
            },
            PatternKind::Lit(l) => {
                let lt = literal_type(l);
                let ok = match self.mode {
                    PatternMode::Match => fits(expected, &lt),
                    PatternMode::Case => fits(&lt, expected),
                    PatternMode::Spec => is_more_precise(&lt, expected),
                };
                if ok {
                    Ok(())
                } else {
                    Err(self.mismatch(p, expected))
                }
            }
            PatternKind::Pin(x) => {
                let Some(t) = self.sigma.get(x) else {
                    return Err(pin_unbound(p, x));
                };
                let ok = match self.mode {
                    PatternMode::Match => fits(expected, t),
                    PatternMode::Case => fits(t, expected),
                    PatternMode::Spec => is_more_precise(t, expected),
                };
                if ok {
                    Ok(())
                } else {
                    Err(Diagnostic::new(
                        self.mismatch(p, expected).code,
                        p.span,
                        format!("pinned `{x}` has type `{t}`, which cannot match `{expected}`"),
                    )
                    .with_types(expected.clone(), t.clone()))
                }
            }
            PatternKind::Tuple(ps) => {
                if let Type::Tuple(ts) = expected {
                    if ts.len() != ps.len() {
                        return Err(self.mismatch(p, expected));
                    }
                    for (q, t) in ps.iter().zip(ts) {
                        self.check(q, t, env)?;
                    }
                    return Ok(());
                }
                let Some(u) = self.uniform(expected) else {
                    return Err(self.mismatch(p, expected));
                };
                for q in ps {
                    self.check(q, &u, env)?;
                }
                Ok(())
            }
            PatternKind::EmptyList => {
                if matches!(expected, Type::List(_)) || self.uniform(expected).is_some() {
                    Ok(())
                } else {
                    Err(self.mismatch(p, expected))
                }
            }
            PatternKind::Cons(h, t) => {
                if let Type::List(e) = expected {
                    self.check(h, e, env)?;
                    return self.check(t, expected, env);
                }
                let Some(u) = self.uniform(expected) else {
                    return Err(self.mismatch(p, expected));
                };
                self.check(h, &u, env)?;
                // a tail matched under `term` is still a list
                let tail = match u {
                    Type::Term => Type::list(Type::Term),
                    other => other,
                };
                self.check(t, &tail, env)
            }
            PatternKind::Map(entries) => {
                if let Type::Map(ts) = expected {
                    for (k, q) in entries {
                        match Type::map_get(ts, k) {
                            Some(t) => self.check(q, t, env)?,
                            None => {
                                return Err(Diagnostic::new(
                                    Code::E_UNKNOWN_KEY,
                                    q.span,
                                    format!("key `{k}` is not in map type `{expected}`"),
                                )
                                .with_types(expected.clone(), shape_type(p)))
                            }
                        }
                    }
                    return Ok(());
                }
                let Some(u) = self.uniform(expected) else {
                    return Err(self.mismatch(p, expected));
                };
                for (_, q) in entries {
                    self.check(q, &u, env)?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_pattern, parse_type};

    fn pat(s: &str) -> Pattern {
        parse_pattern(s).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn check(p: &str, t: &str, mode: PatternMode) -> Result<VarEnv, Code> {
        check_pattern(&pat(p), &ty(t), &VarEnv::new(), &VarEnv::new(), mode).map_err(|d| d.code)
    }

    #[test]
    fn cons_against_term_list_binds_term() {
        let env = check("[z | _]", "[term]", PatternMode::Match).unwrap();
        assert_eq!(env.get("z"), Some(&Type::Term));
    }

    #[test]
    fn tuple_against_list_is_rejected() {
        assert_eq!(check("{x, y}", "[integer]", PatternMode::Match), Err(Code::E_PATTERN_TYPE));
    }

    #[test]
    fn repeated_variable_needs_identical_types() {
        assert_eq!(
            check("{x, x}", "{integer, string}", PatternMode::Match),
            Err(Code::E_NONLINEAR_MISMATCH)
        );
        let env = check("{x, x}", "{integer, integer}", PatternMode::Match).unwrap();
        assert_eq!(env.get("x"), Some(&Type::Integer));
    }

    #[test]
    fn map_pattern_with_subset_of_keys() {
        let env = check("%{9 => b}", "%{:strange => string, 9 => boolean}", PatternMode::Case).unwrap();
        assert_eq!(env.get("b"), Some(&Type::Boolean));
        assert_eq!(check("%{10 => b}", "%{9 => boolean}", PatternMode::Case), Err(Code::E_UNKNOWN_KEY));
    }

    #[test]
    fn pins_consult_sigma() {
        let sigma: VarEnv = [("x", Type::Integer)].into_iter().collect();
        let env = check_pattern(&pat("{^x, y}"), &ty("{integer, integer}"), &sigma, &VarEnv::new(), PatternMode::Match)
            .unwrap();
        assert!(!env.contains("x"));
        assert_eq!(env.get("y"), Some(&Type::Integer));
        let err = check_pattern(&pat("^x"), &Type::String, &sigma, &VarEnv::new(), PatternMode::Match).unwrap_err();
        assert_eq!(err.code, Code::E_PATTERN_TYPE);
        assert_eq!(check("^x", "integer", PatternMode::Match), Err(Code::E_PIN_UNBOUND));
    }

    #[test]
    fn literal_directions_per_mode() {
        // the matched value (integer) can be used as a float literal...
        assert!(check("1.5", "integer", PatternMode::Match).is_ok());
        // ...but a float value is not known to be an integer
        assert_eq!(check("1", "float", PatternMode::Match), Err(Code::E_PATTERN_TYPE));
        // a case clause literal must be usable at the selector type
        assert!(check("1", "float", PatternMode::Case).is_ok());
        assert_eq!(check("1.5", "integer", PatternMode::Case), Err(Code::E_PATTERN_TYPE));
        // a def parameter literal refines the declared type
        assert!(check("1", "integer", PatternMode::Spec).is_ok());
        assert!(check("1", "any", PatternMode::Spec).is_ok());
        assert_eq!(check("1", "float", PatternMode::Spec), Err(Code::E_SPEC_PARAM_MISMATCH));
    }

    #[test]
    fn any_binds_everything_to_any() {
        let env = check("{a, [b | c], %{:k => d}, 3}", "any", PatternMode::Match).unwrap();
        for v in ["a", "b", "c", "d"] {
            assert_eq!(env.get(v), Some(&Type::Any), "{v}");
        }
    }

    #[test]
    fn case_fallback_widens_to_term() {
        let (env, warn) =
            check_case_pattern(&pat("{a, b}"), &Type::Integer, &VarEnv::new(), &VarEnv::new()).unwrap();
        assert_eq!(env.get("a"), Some(&Type::Term));
        assert_eq!(env.get("b"), Some(&Type::Term));
        assert_eq!(warn.unwrap().code, Code::W_UNREACHABLE_PATTERN);

        let (env, warn) =
            check_case_pattern(&pat(":no"), &ty(":yes"), &VarEnv::new(), &VarEnv::new()).unwrap();
        assert!(env.is_empty());
        assert!(warn.is_some());

        let (_, warn) = check_case_pattern(&pat(":yes"), &ty(":yes"), &VarEnv::new(), &VarEnv::new()).unwrap();
        assert!(warn.is_none());

        let err = check_case_pattern(&pat("^x"), &Type::Integer, &VarEnv::new(), &VarEnv::new()).unwrap_err();
        assert_eq!(err.code, Code::E_PIN_UNBOUND);
    }

    #[test]
    fn natural_types_of_parameters() {
        let (t, env) = natural_pattern_type(&pat("x"), &VarEnv::new()).unwrap();
        assert_eq!(t, Type::Any);
        assert_eq!(env.get("x"), Some(&Type::Any));
        let sigma: VarEnv = [("x", Type::Integer)].into_iter().collect();
        let (t, env) = natural_pattern_type(&pat("^x"), &sigma).unwrap();
        assert_eq!((t, env.is_empty()), (Type::Integer, true));
        assert_eq!(natural_pattern_type(&pat("0"), &VarEnv::new()).unwrap().0, Type::Integer);
        assert_eq!(natural_pattern_type(&pat("[]"), &VarEnv::new()).unwrap().0, ty("[any]"));
        assert_eq!(
            natural_pattern_type(&pat("{1, [2 | t]}"), &VarEnv::new()).unwrap().0,
            ty("{integer, [integer]}")
        );
    }

    #[test]
    fn output_extends_input() {
        let gamma: VarEnv = [("q", Type::Float)].into_iter().collect();
        let env = check_pattern(&pat("{a, b}"), &ty("{integer, atom}"), &VarEnv::new(), &gamma, PatternMode::Spec).unwrap();
        assert_eq!(env.get("q"), Some(&Type::Float));
        assert_eq!(env.len(), 3);
    }
}
