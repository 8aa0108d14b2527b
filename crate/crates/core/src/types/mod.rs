//! The type lattice: literal typing, subtyping, precision, the `fits`
//! compatibility relation used at every expected-type position, and
//! join/meet.

pub mod universe;

use crate::ast::{Key, Literal, Type};

pub use universe::TypeUniverse;

pub fn literal_type(l: &Literal) -> Type {
    match l {
        Literal::Int(_) => Type::Integer,
        Literal::Float(_) => Type::Float,
        Literal::Str(_) => Type::String,
        Literal::Bool(_) => Type::Boolean,
        Literal::Atom(a) => Type::AtomLit(a.clone()),
    }
}

/// Decides `t <: u`.
///
/// `any` is related only to itself (and to the lattice bounds); it never
/// stands in for another type here. That job belongs to [`fits`].
pub fn is_subtype(t: &Type, u: &Type) -> bool {
    use Type::*;
    match (t, u) {
        (None, _) | (_, Term) => true,
        (Any, Any) => true,
        (Any, _) | (_, Any) => false,
        (Integer, Integer | Float) => true,
        (Float, Float) | (Boolean, Boolean) | (String, String) | (Atom, Atom) => true,
        (AtomLit(a), AtomLit(b)) => a == b,
        (AtomLit(_), Atom) => true,
        (List(a), List(b)) => is_subtype(a, b),
        (Tuple(ts), Tuple(us)) => {
            ts.len() == us.len() && ts.iter().zip(us).all(|(t, u)| is_subtype(t, u))
        }
        (Map(ts), Map(us)) => map_covers(ts, us, is_subtype),
        (Fun(ps, r), Fun(qs, s)) => {
            ps.len() == qs.len()
                && qs.iter().zip(ps).all(|(q, p)| is_subtype(q, p))
                && is_subtype(r, s)
        }
        _ => false,
    }
}

/// Decides `u ≪ t`: `u` is `t` with some occurrences of `any` refined.
pub fn is_more_precise(u: &Type, t: &Type) -> bool {
    use Type::*;
    match (u, t) {
        (_, Any) => true,
        (List(a), List(b)) => is_more_precise(a, b),
        (Tuple(us), Tuple(ts)) => {
            us.len() == ts.len() && us.iter().zip(ts).all(|(u, t)| is_more_precise(u, t))
        }
        (Map(us), Map(ts)) => {
            us.len() == ts.len()
                && us
                    .iter()
                    .zip(ts)
                    .all(|((ku, u), (kt, t))| ku == kt && is_more_precise(u, t))
        }
        (Fun(ps, r), Fun(qs, s)) => {
            ps.len() == qs.len()
                && ps.iter().zip(qs).all(|(p, q)| is_more_precise(p, q))
                && is_more_precise(r, s)
        }
        _ => u == t,
    }
}

/// Is a value of type `t` acceptable where `u` is expected?
///
/// Combines subsumption with downcasts from `any`: `any` fits everywhere and
/// everything fits `any`, recursively inside constructors.
pub fn fits(t: &Type, u: &Type) -> bool {
    use Type::*;
    match (t, u) {
        (None, _) | (_, Term) | (Any, _) | (_, Any) => true,
        (List(a), List(b)) => fits(a, b),
        (Tuple(ts), Tuple(us)) => ts.len() == us.len() && ts.iter().zip(us).all(|(t, u)| fits(t, u)),
        (Map(ts), Map(us)) => map_covers(ts, us, fits),
        (Fun(ps, r), Fun(qs, s)) => {
            ps.len() == qs.len() && qs.iter().zip(ps).all(|(q, p)| fits(q, p)) && fits(r, s)
        }
        _ => is_subtype(t, u),
    }
}

/// Every key of `us` is in `ts`, and the shared values are related.
fn map_covers(ts: &[(Key, Type)], us: &[(Key, Type)], rel: fn(&Type, &Type) -> bool) -> bool {
    us.iter()
        .all(|(k, u)| Type::map_get(ts, k).is_some_and(|t| rel(t, u)))
}

pub fn join(t: &Type, u: &Type) -> Type {
    use Type::*;
    match (t, u) {
        (Any, Any) => Any,
        (Any, x) | (x, Any) => x.clone(),
        (None, x) | (x, None) => x.clone(),
        (Term, _) | (_, Term) => Term,
        _ if t == u => t.clone(),
        (Integer, Float) | (Float, Integer) => Float,
        (AtomLit(_), AtomLit(_) | Atom) | (Atom, AtomLit(_)) => Atom,
        (List(a), List(b)) => Type::list(join(a, b)),
        (Tuple(ts), Tuple(us)) if ts.len() == us.len() => {
            Tuple(ts.iter().zip(us).map(|(t, u)| join(t, u)).collect())
        }
        (Map(ts), Map(us)) => Map(ts
            .iter()
            .filter_map(|(k, t)| Type::map_get(us, k).map(|u| (k.clone(), join(t, u))))
            .collect()),
        (Fun(ps, r), Fun(qs, s)) if ps.len() == qs.len() => Type::fun(
            ps.iter().zip(qs).map(|(p, q)| meet(p, q)).collect(),
            join(r, s),
        ),
        _ => Term,
    }
}

pub fn meet(t: &Type, u: &Type) -> Type {
    use Type::*;
    match (t, u) {
        (Any, x) | (x, Any) => x.clone(),
        (Term, x) | (x, Term) => x.clone(),
        (None, _) | (_, None) => None,
        _ if t == u => t.clone(),
        (Integer, Float) | (Float, Integer) => Integer,
        (AtomLit(a), Atom) | (Atom, AtomLit(a)) => AtomLit(a.clone()),
        (List(a), List(b)) => Type::list(meet(a, b)),
        (Tuple(ts), Tuple(us)) if ts.len() == us.len() => {
            Tuple(ts.iter().zip(us).map(|(t, u)| meet(t, u)).collect())
        }
        (Map(ts), Map(us)) => {
            let mut entries: Vec<(Key, Type)> = ts
                .iter()
                .map(|(k, t)| match Type::map_get(us, k) {
                    Some(u) => (k.clone(), meet(t, u)),
                    Option::None => (k.clone(), t.clone()),
                })
                .collect();
            entries.extend(
                us.iter()
                    .filter(|(k, _)| Type::map_get(ts, k).is_none())
                    .cloned(),
            );
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Map(entries)
        }
        (Fun(ps, r), Fun(qs, s)) if ps.len() == qs.len() => Type::fun(
            ps.iter().zip(qs).map(|(p, q)| join(p, q)).collect(),
            meet(r, s),
        ),
        _ => None,
    }
}
