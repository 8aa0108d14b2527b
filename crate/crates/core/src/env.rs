//! Variable environments, the signature environment and module prefixes.

use std::collections::BTreeMap;
use std::fmt;

use crate::ast::Type;

/// Variable name to type. Ordered so that listings are deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarEnv(BTreeMap<String, Type>);

impl VarEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Type> {
        self.0.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, ty: Type) {
        self.0.insert(name.into(), ty);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Right-biased union: bindings in `other` win on collision.
    pub fn merge(&self, other: &VarEnv) -> VarEnv {
        let mut out = self.clone();
        out.merge_in(other);
        out
    }

    pub fn merge_in(&mut self, other: &VarEnv) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }
}

impl<S: Into<String>> FromIterator<(S, Type)> for VarEnv {
    fn from_iter<I: IntoIterator<Item = (S, Type)>>(iter: I) -> Self {
        VarEnv(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for VarEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}

/// The enclosing module path, outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModulePrefix(Vec<String>);

impl ModulePrefix {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn new<S: Into<String>>(segments: impl IntoIterator<Item = S>) -> Self {
        ModulePrefix(segments.into_iter().map(Into::into).collect())
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// The prefix for a module nested directly inside this one.
    pub fn child(&self, name: &[String]) -> ModulePrefix {
        let mut out = self.0.clone();
        out.extend(name.iter().cloned());
        ModulePrefix(out)
    }

    /// `Base.Math` + `dec` gives `Base.Math.dec`; the root prefix leaves the
    /// name bare.
    pub fn qualify(&self, name: &str) -> String {
        qualified_name(&self.0, name)
    }
}

impl fmt::Display for ModulePrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

pub fn qualified_name(path: &[String], name: &str) -> String {
    if path.is_empty() {
        name.to_string()
    } else {
        format!("{}.{name}", path.join("."))
    }
}

/// `(qualified name, arity)`
pub type SigKey = (String, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DuplicateSignature {
    pub key: SigKey,
}

/// Declared function types, keyed by qualified name and arity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignatureEnv(BTreeMap<SigKey, Type>);

impl SignatureEnv {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `prefix.name/arity`. The first entry for a key is kept.
    pub fn add_signature(
        &mut self,
        prefix: &ModulePrefix,
        name: &str,
        arity: usize,
        fn_type: Type,
    ) -> Result<(), DuplicateSignature> {
        debug_assert!(matches!(&fn_type, Type::Fun(ps, _) if ps.len() == arity));
        let key = (prefix.qualify(name), arity);
        if self.0.contains_key(&key) {
            return Err(DuplicateSignature { key });
        }
        self.0.insert(key, fn_type);
        Ok(())
    }

    pub fn lookup(&self, qualified: &str, arity: usize) -> Option<&Type> {
        self.0.get(&(qualified.to_string(), arity))
    }

    pub fn contains(&self, qualified: &str, arity: usize) -> bool {
        self.lookup(qualified, arity).is_some()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SigKey, &Type)> {
        self.0.iter()
    }

    /// One `Name.f/n :: (t, ...) -> t` line per entry, in key order.
    pub fn dump(&self) -> Vec<String> {
        self.0
            .iter()
            .map(|((name, arity), t)| format!("{name}/{arity} :: {t}"))
            .collect()
    }
}
