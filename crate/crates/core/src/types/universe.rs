//! Finite enumeration of types up to a nesting depth, for exhaustive
//! testing of the lattice operations.

use std::collections::HashMap;

use crate::ast::{Key, Type};

/// All types of bounded depth built from a base set.
///
/// Level 1 is the base set. Level `n + 1` adds, over the types of level
/// `n`: lists, 2-tuples, maps with up to two keys from `keys` (the empty
/// map included), and unary functions. Enumeration order is deterministic.
#[derive(Clone, Debug)]
pub struct TypeUniverse {
    types: Vec<Type>,
    index: HashMap<Type, usize>,
}

impl TypeUniverse {
    pub fn new(base: Vec<Type>, keys: &[Key], depth: usize) -> Self {
        let mut level = base.clone();
        for _ in 1..depth {
            let mut next = base.clone();
            for a in &level {
                next.push(Type::list(a.clone()));
            }
            for a in &level {
                for b in &level {
                    next.push(Type::Tuple(vec![a.clone(), b.clone()]));
                }
            }
            next.push(Type::Map(Vec::new()));
            for k in keys {
                for a in &level {
                    next.push(Type::Map(vec![(k.clone(), a.clone())]));
                }
            }
            for (i, k1) in keys.iter().enumerate() {
                for k2 in &keys[i + 1..] {
                    for a in &level {
                        for b in &level {
                            next.push(
                                Type::map([(k1.clone(), a.clone()), (k2.clone(), b.clone())])
                                    .expect("distinct keys"),
                            );
                        }
                    }
                }
            }
            for a in &level {
                for b in &level {
                    next.push(Type::fun(vec![a.clone()], b.clone()));
                }
            }
            level = next;
        }
        let mut types = Vec::with_capacity(level.len());
        let mut index = HashMap::with_capacity(level.len());
        for t in level {
            if !index.contains_key(&t) {
                index.insert(t.clone(), types.len());
                types.push(t);
            }
        }
        TypeUniverse { types, index }
    }

    /// `{none, term, integer, float, boolean, string, atom, :a, :b, any}`
    /// closed to depth 2 with map keys `{:a, 1}`.
    ///
    /// `%{}` is included because it is the join of maps with disjoint keys.
    pub fn standard() -> Self {
        Self::new(Self::standard_base(), &Self::standard_keys(), 2)
    }

    pub fn standard_base() -> Vec<Type> {
        vec![
            Type::None,
            Type::Term,
            Type::Integer,
            Type::Float,
            Type::Boolean,
            Type::String,
            Type::Atom,
            Type::atom("a"),
            Type::atom("b"),
            Type::Any,
        ]
    }

    pub fn standard_keys() -> Vec<Key> {
        vec![Key::Atom("a".into()), Key::Int(1)]
    }

    pub fn types(&self) -> &[Type] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn get(&self, i: usize) -> &Type {
        &self.types[i]
    }

    pub fn index_of(&self, t: &Type) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn contains(&self, t: &Type) -> bool {
        self.index.contains_key(t)
    }

    /// Indices of the types with no `any` inside.
    pub fn static_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.types[i].is_static()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_universe_size() {
        let u = TypeUniverse::standard();
        // 10 base + 10 lists + 100 tuples + 1 empty map + 20 one-key maps
        // + 100 two-key maps + 100 functions
        assert_eq!(u.len(), 341);
        assert!(u.types().iter().all(|t| t.depth() <= 2));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = TypeUniverse::standard();
        let b = TypeUniverse::standard();
        assert_eq!(a.types(), b.types());
        assert_eq!(a.index_of(&Type::list(Type::Any)), b.index_of(&Type::list(Type::Any)));
    }

    #[test]
    fn depth_one_is_the_base() {
        let u = TypeUniverse::new(TypeUniverse::standard_base(), &[], 1);
        assert_eq!(u.len(), 10);
    }
}
