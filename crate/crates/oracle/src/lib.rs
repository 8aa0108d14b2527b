//! Brute-force reference relations over a finite [`TypeUniverse`].
//!
//! Nothing here calls the checker's own lattice code. Subtyping and
//! precision are computed as least fixpoints of their inference rules, and
//! the "usable at" relation is the reachability closure of subsumption and
//! downcast steps followed by one precision step. The checker's
//! algorithmic relations are tested against these matrices.
//!
//! [`Micro`] is a tiny expression language whose derivable type sets are
//! computed from the declarative typing rules, for cross-checking type
//! synthesis.

use exgrad::ast::{Key, Type};
use exgrad::types::TypeUniverse;

/// A fixed-size set of universe indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns true if the bit was newly set.
    pub fn insert(&mut self, i: usize) -> bool {
        let w = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    /// Returns true if anything changed.
    pub fn union_with(&mut self, other: &BitSet) -> bool {
        let mut changed = false;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            let n = *a | b;
            changed |= n != *a;
            *a = n;
        }
        changed
    }

    pub fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }
}

/// A square boolean matrix: `get(i, j)` means `i R j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitSet>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        BitMatrix {
            rows: vec![BitSet::new(n); n],
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn set(&mut self, i: usize, j: usize) -> bool {
        self.rows[i].insert(j)
    }

    pub fn row(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    pub fn transpose(&self) -> BitMatrix {
        let n = self.len();
        let mut t = BitMatrix::new(n);
        for i in 0..n {
            for j in self.rows[i].iter() {
                t.set(j, i);
            }
        }
        t
    }

    /// Warshall. Returns true if any pair was added.
    pub fn close_transitively(&mut self) -> bool {
        let n = self.len();
        let mut changed = false;
        for k in 0..n {
            let via = self.rows[k].clone();
            for i in 0..n {
                if i != k && self.rows[i].contains(k) {
                    changed |= self.rows[i].union_with(&via);
                }
            }
        }
        changed
    }

    /// Relational composition `self ; other`.
    pub fn compose(&self, other: &BitMatrix) -> BitMatrix {
        let n = self.len();
        let mut out = BitMatrix::new(n);
        for i in 0..n {
            for v in self.rows[i].iter() {
                out.rows[i].union_with(&other.rows[v]);
            }
        }
        out
    }

    /// Number of set pairs.
    pub fn count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum()
    }
}

/// A type with its immediate components replaced by universe indices.
/// `None` marks a component that falls outside the universe.
#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    List(Option<usize>),
    Tuple(Vec<Option<usize>>),
    Map(Vec<(Key, Option<usize>)>),
    Fun(Vec<Option<usize>>, Option<usize>),
}

fn shape(u: &TypeUniverse, t: &Type) -> Shape {
    match t {
        Type::List(e) => Shape::List(u.index_of(e)),
        Type::Tuple(ts) => Shape::Tuple(ts.iter().map(|t| u.index_of(t)).collect()),
        Type::Map(es) => Shape::Map(es.iter().map(|(k, t)| (k.clone(), u.index_of(t))).collect()),
        Type::Fun(ps, r) => Shape::Fun(ps.iter().map(|t| u.index_of(t)).collect(), u.index_of(r)),
        _ => Shape::Leaf,
    }
}

fn rel(m: &BitMatrix, a: Option<usize>, b: Option<usize>) -> bool {
    matches!((a, b), (Some(a), Some(b)) if m.get(a, b))
}

fn all_rel(m: &BitMatrix, xs: &[Option<usize>], ys: &[Option<usize>]) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(&x, &y)| rel(m, x, y))
}

/// The reference relations over one universe.
pub struct Relations {
    pub universe: TypeUniverse,
    /// `sub.get(t, u)`: `t <: u`.
    pub sub: BitMatrix,
    /// `prec.get(u, t)`: `u ≪ t`.
    pub prec: BitMatrix,
    /// Reflexive-transitive closure of subtyping steps and downcast steps
    /// (`v` to any `w` with `w ≪ v`).
    pub reach: BitMatrix,
    /// `fits.get(t, u)`: some `v` reachable from `t` has `v ≪ u`.
    pub fits: BitMatrix,
    shapes: Vec<Shape>,
}

impl Relations {
    pub fn compute(universe: TypeUniverse) -> Self {
        let shapes: Vec<Shape> = universe.types().iter().map(|t| shape(&universe, t)).collect();
        let sub = subtyping(&universe, &shapes);
        let prec = precision(&universe, &shapes);

        let n = universe.len();
        let mut reach = sub.clone();
        let down = prec.transpose();
        for i in 0..n {
            reach.set(i, i);
            reach.rows[i].union_with(&down.rows[i]);
        }
        reach.close_transitively();
        let fits = reach.compose(&prec);

        Relations {
            universe,
            sub,
            prec,
            reach,
            fits,
            shapes,
        }
    }

    pub fn standard() -> Self {
        Self::compute(TypeUniverse::standard())
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn idx(&self, t: &Type) -> usize {
        self.universe
            .index_of(t)
            .unwrap_or_else(|| panic!("`{t}` is not in the universe"))
    }

    pub fn is_sub(&self, t: &Type, u: &Type) -> bool {
        self.sub.get(self.idx(t), self.idx(u))
    }

    pub fn is_prec(&self, u: &Type, t: &Type) -> bool {
        self.prec.get(self.idx(u), self.idx(t))
    }

    pub fn closure_fits(&self, t: &Type, u: &Type) -> bool {
        self.fits.get(self.idx(t), self.idx(u))
    }

    /// Every type reachable from a member of `s`.
    pub fn up(&self, s: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.len());
        for i in s.iter() {
            out.union_with(self.reach.row(i));
        }
        out
    }

    pub fn up_of(&self, t: &Type) -> BitSet {
        self.reach.row(self.idx(t)).clone()
    }

    pub fn brute_lub(&self, t: &Type, u: &Type) -> Bound {
        let (a, b) = (self.idx(t), self.idx(u));
        let candidates: Vec<usize> = self
            .universe
            .static_indices()
            .into_iter()
            .filter(|&c| self.sub.get(a, c) && self.sub.get(b, c))
            .collect();
        self.extreme(&candidates, |x, y| self.sub.get(x, y))
    }

    pub fn brute_glb(&self, t: &Type, u: &Type) -> Bound {
        let (a, b) = (self.idx(t), self.idx(u));
        let candidates: Vec<usize> = self
            .universe
            .static_indices()
            .into_iter()
            .filter(|&c| self.sub.get(c, a) && self.sub.get(c, b))
            .collect();
        self.extreme(&candidates, |x, y| self.sub.get(y, x))
    }

    /// Candidates `c` with `below(c, d)` for every other candidate `d`.
    fn extreme(&self, candidates: &[usize], below: impl Fn(usize, usize) -> bool) -> Bound {
        let best: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&c| candidates.iter().all(|&d| below(c, d)))
            .collect();
        match best.as_slice() {
            [] if candidates.is_empty() => Bound::NotFound,
            [] => Bound::Ambiguous(self.minimal(candidates, &below)),
            [one] => Bound::Unique(self.universe.get(*one).clone()),
            // mutually related candidates are equivalent; all are `best`
            many => Bound::Ambiguous(many.iter().map(|&i| self.universe.get(i).clone()).collect()),
        }
    }

    fn minimal(&self, candidates: &[usize], below: &impl Fn(usize, usize) -> bool) -> Vec<Type> {
        candidates
            .iter()
            .copied()
            .filter(|&c| !candidates.iter().any(|&d| d != c && below(d, c) && !below(c, d)))
            .map(|i| self.universe.get(i).clone())
            .collect()
    }

    /// The list type over universe index `i`, if present.
    fn list_of(&self, i: usize) -> Option<usize> {
        self.universe.index_of(&Type::list(self.universe.get(i).clone()))
    }

    fn is_list(&self, i: usize) -> bool {
        matches!(self.shapes[i], Shape::List(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Unique(Type),
    /// Several incomparable minimal (or maximal) bounds.
    Ambiguous(Vec<Type>),
    NotFound,
}

fn subtyping(u: &TypeUniverse, shapes: &[Shape]) -> BitMatrix {
    let n = u.len();
    let ty = |i: usize| u.get(i);
    let mut sub = BitMatrix::new(n);
    for i in 0..n {
        sub.set(i, i);
        for j in 0..n {
            let axiom = matches!(ty(i), Type::None)
                || matches!(ty(j), Type::Term)
                || matches!((ty(i), ty(j)), (Type::Integer, Type::Float))
                || matches!((ty(i), ty(j)), (Type::AtomLit(_), Type::Atom));
            if axiom {
                sub.set(i, j);
            }
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if sub.get(i, j) {
                    continue;
                }
                let holds = match (&shapes[i], &shapes[j]) {
                    (Shape::List(a), Shape::List(b)) => rel(&sub, *a, *b),
                    (Shape::Tuple(xs), Shape::Tuple(ys)) => all_rel(&sub, xs, ys),
                    // width and depth: every key of the wider type is present
                    (Shape::Map(xs), Shape::Map(ys)) => ys.iter().all(|(k, y)| {
                        xs.iter().any(|(k2, x)| k2 == k && rel(&sub, *x, *y))
                    }),
                    (Shape::Fun(ps, r), Shape::Fun(qs, s)) => {
                        all_rel(&sub, qs, ps) && rel(&sub, *r, *s)
                    }
                    _ => false,
                };
                if holds {
                    changed |= sub.set(i, j);
                }
            }
        }
        changed |= sub.close_transitively();
        if !changed {
            return sub;
        }
    }
}

fn precision(u: &TypeUniverse, shapes: &[Shape]) -> BitMatrix {
    let n = u.len();
    let mut prec = BitMatrix::new(n);
    for i in 0..n {
        prec.set(i, i);
        for j in 0..n {
            if matches!(u.get(j), Type::Any) {
                prec.set(i, j);
            }
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if prec.get(i, j) {
                    continue;
                }
                let holds = match (&shapes[i], &shapes[j]) {
                    (Shape::List(a), Shape::List(b)) => rel(&prec, *a, *b),
                    (Shape::Tuple(xs), Shape::Tuple(ys)) => all_rel(&prec, xs, ys),
                    (Shape::Map(xs), Shape::Map(ys)) => {
                        xs.len() == ys.len()
                            && ys.iter().all(|(k, y)| {
                                xs.iter().any(|(k2, x)| k2 == k && rel(&prec, *x, *y))
                            })
                    }
                    // covariant in every position, unlike subtyping
                    (Shape::Fun(ps, r), Shape::Fun(qs, s)) => {
                        all_rel(&prec, ps, qs) && rel(&prec, *r, *s)
                    }
                    _ => false,
                };
                if holds {
                    changed |= prec.set(i, j);
                }
            }
        }
        if !changed {
            return prec;
        }
    }
}

/// Signatures available to [`Micro::Call`], all unary and at the root
/// module.
pub fn micro_signatures() -> Vec<(&'static str, Type)> {
    vec![
        ("tofloat", Type::fun(vec![Type::Integer], Type::Float)),
        ("count", Type::fun(vec![Type::Any], Type::Integer)),
        ("label", Type::fun(vec![Type::Float], Type::atom("a"))),
        ("empty", Type::fun(vec![Type::list(Type::Any)], Type::Boolean)),
        ("show", Type::fun(vec![Type::Tuple(vec![Type::Integer, Type::Any])], Type::String)),
        ("tag", Type::fun(vec![Type::Atom], Type::atom("b"))),
    ]
}

/// Small expressions over literals, an untyped call `u()`, calls to the
/// functions of [`micro_signatures`], operators, `if` and list/tuple
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Micro {
    Int,
    Float,
    Str,
    Bool,
    AtomA,
    AtomB,
    Untyped,
    Call(usize, Box<Micro>),
    Neg(Box<Micro>),
    Not(Box<Micro>),
    Add(Box<Micro>, Box<Micro>),
    Div(Box<Micro>, Box<Micro>),
    And(Box<Micro>, Box<Micro>),
    Less(Box<Micro>, Box<Micro>),
    Concat(Box<Micro>, Box<Micro>),
    If(Box<Micro>, Box<Micro>, Box<Micro>),
    Empty,
    Cons(Box<Micro>, Box<Micro>),
    Pair(Box<Micro>, Box<Micro>),
    Append(Box<Micro>, Box<Micro>),
}

impl Micro {
    pub const LEAVES: [Micro; 7] = [
        Micro::Int,
        Micro::Float,
        Micro::Str,
        Micro::Bool,
        Micro::AtomA,
        Micro::AtomB,
        Micro::Untyped,
    ];

    /// True when no `any` can arise: no untyped call, and no typed call
    /// whose argument could be downcast.
    pub fn is_static(&self) -> bool {
        use Micro::*;
        match self {
            Untyped => false,
            Int | Float | Str | Bool | AtomA | AtomB | Empty => true,
            Call(_, a) | Neg(a) | Not(a) => a.is_static(),
            Add(a, b) | Div(a, b) | And(a, b) | Less(a, b) | Concat(a, b) | Cons(a, b)
            | Pair(a, b) | Append(a, b) => a.is_static() && b.is_static(),
            If(c, a, b) => c.is_static() && a.is_static() && b.is_static(),
        }
    }

    /// Source text, fully parenthesized.
    pub fn to_source(&self) -> String {
        use Micro::*;
        let sigs = micro_signatures();
        match self {
            Int => "4".into(),
            Float => "2.5".into(),
            Str => "\"s\"".into(),
            Bool => "true".into(),
            AtomA => ":a".into(),
            AtomB => ":b".into(),
            Untyped => "u()".into(),
            Call(i, a) => format!("{}({})", sigs[*i].0, a.to_source()),
            Neg(a) => format!("(-{})", a.to_source()),
            Not(a) => format!("(not {})", a.to_source()),
            Add(a, b) => format!("({} + {})", a.to_source(), b.to_source()),
            Div(a, b) => format!("({} / {})", a.to_source(), b.to_source()),
            And(a, b) => format!("({} and {})", a.to_source(), b.to_source()),
            Less(a, b) => format!("({} < {})", a.to_source(), b.to_source()),
            Concat(a, b) => format!("({} <> {})", a.to_source(), b.to_source()),
            If(c, a, b) => format!(
                "(if {} do {} else {} end)",
                c.to_source(),
                a.to_source(),
                b.to_source()
            ),
            Empty => "[]".into(),
            Cons(a, b) => format!("[{} | {}]", a.to_source(), b.to_source()),
            Pair(a, b) => format!("{{{}, {}}}", a.to_source(), b.to_source()),
            Append(a, b) => format!("({} ++ {})", a.to_source(), b.to_source()),
        }
    }

    /// The set of universe types the declarative rules assign to this
    /// term, closed under subsumption and downcast. Empty means the term
    /// has no typing derivation (within the universe).
    pub fn derivable(&self, r: &Relations) -> BitSet {
        self.derive(r, true)
    }

    /// Like [`Micro::derivable`], but an untyped result is never downcast
    /// straight to `none`. Downcasting to `none` lets `u() + u()` be used
    /// anywhere, which is not a derivation a checker should look for.
    pub fn derivable_avoiding_none(&self, r: &Relations) -> BitSet {
        self.derive(r, false)
    }

    fn derive(&self, r: &Relations, any_to_none: bool) -> BitSet {
        use Micro::*;
        let n = r.len();
        let single = |t: &Type| r.up_of(t);
        let numeric = |s: &BitSet| -> BitSet {
            let float = r.idx(&Type::Float);
            let mut out = BitSet::new(n);
            for t in s.iter().filter(|&t| r.sub.get(t, float)) {
                out.insert(t);
            }
            r.up(&out)
        };
        let requires = |s: &BitSet, t: &Type, then: &Type| -> BitSet {
            if s.contains(r.idx(t)) {
                single(then)
            } else {
                BitSet::new(n)
            }
        };
        match self {
            Int => single(&Type::Integer),
            Float => single(&Type::Float),
            Str => single(&Type::String),
            Bool => single(&Type::Boolean),
            AtomA => single(&Type::atom("a")),
            AtomB => single(&Type::atom("b")),
            Untyped => {
                let mut s = single(&Type::Any);
                if !any_to_none {
                    s.remove(r.idx(&Type::None));
                }
                s
            }
            Call(i, a) => {
                let Type::Fun(params, result) = &micro_signatures()[*i].1 else {
                    unreachable!()
                };
                let p = r.idx(&params[0]);
                if a.derive(r, any_to_none).iter().any(|t| r.prec.get(t, p)) {
                    single(result)
                } else {
                    BitSet::new(n)
                }
            }
            Neg(a) => numeric(&a.derive(r, any_to_none)),
            Add(a, b) => numeric(&a.derive(r, any_to_none).intersect(&b.derive(r, any_to_none))),
            Div(a, b) => {
                let both = a.derive(r, any_to_none).intersect(&b.derive(r, any_to_none));
                requires(&both, &Type::Float, &Type::Float)
            }
            Not(a) => requires(&a.derive(r, any_to_none), &Type::Boolean, &Type::Boolean),
            And(a, b) => {
                let both = a.derive(r, any_to_none).intersect(&b.derive(r, any_to_none));
                requires(&both, &Type::Boolean, &Type::Boolean)
            }
            Less(a, b) => {
                if a.derive(r, any_to_none).is_empty() || b.derive(r, any_to_none).is_empty() {
                    BitSet::new(n)
                } else {
                    single(&Type::Boolean)
                }
            }
            Concat(a, b) => {
                let both = a.derive(r, any_to_none).intersect(&b.derive(r, any_to_none));
                requires(&both, &Type::String, &Type::String)
            }
            If(c, a, b) => {
                if c.derive(r, any_to_none).contains(r.idx(&Type::Boolean)) {
                    r.up(&a.derive(r, any_to_none).intersect(&b.derive(r, any_to_none)))
                } else {
                    BitSet::new(n)
                }
            }
            Empty => {
                let mut out = BitSet::new(n);
                for i in (0..n).filter(|&i| r.is_list(i)) {
                    out.insert(i);
                }
                r.up(&out)
            }
            Cons(h, t) => {
                let tails = t.derive(r, any_to_none);
                let mut out = BitSet::new(n);
                for x in h.derive(r, any_to_none).iter() {
                    if let Some(l) = r.list_of(x) {
                        if tails.contains(l) {
                            out.insert(l);
                        }
                    }
                }
                r.up(&out)
            }
            Pair(a, b) => {
                let (da, db) = (a.derive(r, any_to_none), b.derive(r, any_to_none));
                let mut out = BitSet::new(n);
                for x in da.iter() {
                    for y in db.iter() {
                        let pair = Type::Tuple(vec![r.universe.get(x).clone(), r.universe.get(y).clone()]);
                        if let Some(p) = r.universe.index_of(&pair) {
                            out.insert(p);
                        }
                    }
                }
                r.up(&out)
            }
            Append(a, b) => {
                let both = a.derive(r, any_to_none).intersect(&b.derive(r, any_to_none));
                let mut out = BitSet::new(n);
                for l in both.iter().filter(|&l| r.is_list(l)) {
                    out.insert(l);
                }
                r.up(&out)
            }
        }
    }

    /// Every term of at most `depth` operator levels, keeping the result
    /// types inside the standard universe: constructors only take
    /// scalar-level arguments.
    pub fn enumerate(depth: usize) -> Vec<Micro> {
        let mut scalar: Vec<Micro> = Self::LEAVES.to_vec();
        let mut all = scalar.clone();
        all.push(Micro::Empty);
        for _ in 0..depth {
            let mut next_scalar = Self::LEAVES.to_vec();
            let mut next_all = Vec::new();
            let b = |m: &Micro| Box::new(m.clone());
            for a in &all {
                for i in 0..micro_signatures().len() {
                    next_scalar.push(Micro::Call(i, b(a)));
                }
                next_scalar.push(Micro::Neg(b(a)));
                next_scalar.push(Micro::Not(b(a)));
            }
            for x in &all {
                for y in &all {
                    next_scalar.push(Micro::Add(b(x), b(y)));
                    next_scalar.push(Micro::Less(b(x), b(y)));
                    next_all.push(Micro::Append(b(x), b(y)));
                }
            }
            for x in &scalar {
                for y in &scalar {
                    next_scalar.push(Micro::Div(b(x), b(y)));
                    next_scalar.push(Micro::And(b(x), b(y)));
                    next_scalar.push(Micro::Concat(b(x), b(y)));
                    next_all.push(Micro::Pair(b(x), b(y)));
                }
                for t in &all {
                    next_all.push(Micro::Cons(b(x), b(t)));
                }
            }
            for c in &scalar {
                for x in &scalar {
                    for y in &scalar {
                        next_scalar.push(Micro::If(b(c), b(x), b(y)));
                    }
                }
            }
            next_all.push(Micro::Empty);
            next_all.extend(next_scalar.iter().cloned());
            scalar = next_scalar;
            all = next_all;
        }
        all
    }
}
