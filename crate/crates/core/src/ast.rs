//! Abstract syntax of the Elixir fragment and of the type language.

use std::fmt;

use crate::span::{Span, Spanned};

/// Map keys: atoms, booleans and integers. Ordered so that map types can be
/// kept in a canonical key order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Key {
    Atom(String),
    Bool(bool),
    Int(i64),
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Atom(a) => write!(f, ":{a}"),
            Key::Bool(b) => write!(f, "{b}"),
            Key::Int(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Literal {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
    Atom(String),
}

impl Literal {
    pub fn as_key(&self) -> Option<Key> {
        match self {
            Literal::Int(i) => Some(Key::Int(*i)),
            Literal::Bool(b) => Some(Key::Bool(*b)),
            Literal::Atom(a) => Some(Key::Atom(a.clone())),
            Literal::Float(_) | Literal::Str(_) => None,
        }
    }
}

impl From<Key> for Literal {
    fn from(k: Key) -> Self {
        match k {
            Key::Atom(a) => Literal::Atom(a),
            Key::Bool(b) => Literal::Bool(b),
            Key::Int(i) => Literal::Int(i),
        }
    }
}

/// The type language. Map entries are always held in ascending key order,
/// so derived equality ignores the order keys were written in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    None,
    Term,
    Any,
    Integer,
    Float,
    Boolean,
    String,
    Atom,
    AtomLit(String),
    List(Box<Type>),
    Tuple(Vec<Type>),
    Map(Vec<(Key, Type)>),
    Fun(Vec<Type>, Box<Type>),
}

impl Type {
    pub fn list(elem: Type) -> Type {
        Type::List(Box::new(elem))
    }

    pub fn fun(params: Vec<Type>, result: Type) -> Type {
        Type::Fun(params, Box::new(result))
    }

    pub fn atom(name: &str) -> Type {
        Type::AtomLit(name.to_string())
    }

    /// Builds a map type, sorting entries. Returns the offending key if two
    /// entries share one.
    pub fn map<I>(entries: I) -> Result<Type, Key>
    where
        I: IntoIterator<Item = (Key, Type)>,
    {
        let mut entries: Vec<(Key, Type)> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(w[0].0.clone());
            }
        }
        Ok(Type::Map(entries))
    }

    pub fn map_get<'a>(entries: &'a [(Key, Type)], key: &Key) -> Option<&'a Type> {
        entries
            .binary_search_by(|(k, _)| k.cmp(key))
            .ok()
            .map(|i| &entries[i].1)
    }

    /// True when `any` occurs nowhere inside the type.
    pub fn is_static(&self) -> bool {
        match self {
            Type::Any => false,
            Type::List(t) => t.is_static(),
            Type::Tuple(ts) => ts.iter().all(Type::is_static),
            Type::Map(es) => es.iter().all(|(_, t)| t.is_static()),
            Type::Fun(ps, r) => ps.iter().all(Type::is_static) && r.is_static(),
            _ => true,
        }
    }

    /// Nesting depth: base types have depth 1, `[integer]` depth 2.
    pub fn depth(&self) -> usize {
        match self {
            Type::List(t) => 1 + t.depth(),
            Type::Tuple(ts) => 1 + ts.iter().map(Type::depth).max().unwrap_or(0),
            Type::Map(es) => 1 + es.iter().map(|(_, t)| t.depth()).max().unwrap_or(0),
            Type::Fun(ps, r) => 1 + ps.iter().map(Type::depth).max().unwrap_or(0).max(r.depth()),
            _ => 1,
        }
    }
}

/// Renders types in `@spec` surface syntax.
impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::None => f.write_str("none"),
            Type::Term => f.write_str("term"),
            Type::Any => f.write_str("any"),
            Type::Integer => f.write_str("integer"),
            Type::Float => f.write_str("float"),
            Type::Boolean => f.write_str("boolean"),
            Type::String => f.write_str("string"),
            Type::Atom => f.write_str("atom"),
            Type::AtomLit(a) => write!(f, ":{a}"),
            Type::List(t) => write!(f, "[{t}]"),
            Type::Tuple(ts) => {
                f.write_str("{")?;
                write_sep(f, ts)?;
                f.write_str("}")
            }
            Type::Map(es) => {
                f.write_str("%{")?;
                for (i, (k, t)) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k} => {t}")?;
                }
                f.write_str("}")
            }
            Type::Fun(ps, r) => {
                f.write_str("(")?;
                write_sep(f, ps)?;
                write!(f, ") -> ")?;
                // a function result that is itself a function must be
                // parenthesized to re-parse
                match r.as_ref() {
                    Type::Fun(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
        }
    }
}

fn write_sep<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    pub kind: PatternKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PatternKind {
    Wildcard,
    Lit(Literal),
    Var(String),
    Pin(String),
    Tuple(Vec<Pattern>),
    EmptyList,
    Cons(Box<Pattern>, Box<Pattern>),
    Map(Vec<(Key, Pattern)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    And,
    Or,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
    StrictEq,
    StrictNe,
    /// `++`
    ListConcat,
    /// `--`
    ListDiff,
    /// `<>`
    StrConcat,
}

impl BinOp {
    pub fn as_str(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::And => "and",
            BinOp::Or => "or",
            BinOp::Lt => "<",
            BinOp::Gt => ">",
            BinOp::Le => "<=",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::StrictEq => "===",
            BinOp::StrictNe => "!==",
            BinOp::ListConcat => "++",
            BinOp::ListDiff => "--",
            BinOp::StrConcat => "<>",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinOp::Lt
                | BinOp::Gt
                | BinOp::Le
                | BinOp::Ge
                | BinOp::Eq
                | BinOp::Ne
                | BinOp::StrictEq
                | BinOp::StrictNe
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseClause {
    pub pattern: Pattern,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CondClause {
    pub cond: Expr,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Lit(Literal),
    Var(String),
    Tuple(Vec<Expr>),
    EmptyList,
    Cons(Box<Expr>, Box<Expr>),
    Map(Vec<(Key, Expr)>),
    Access(Box<Expr>, Key),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Unary(UnOp, Box<Expr>),
    /// An `if` without `else` is parsed with an `:nil` else branch.
    If {
        cond: Box<Expr>,
        then_branch: Box<Expr>,
        else_branch: Box<Expr>,
    },
    Case(Box<Expr>, Vec<CaseClause>),
    Cond(Vec<CondClause>),
    /// `q f_name(args)`; an empty qualifier is a local call.
    Call {
        qualifier: Vec<String>,
        name: String,
        args: Vec<Expr>,
    },
    /// `x.(args)`
    VarCall { var: String, args: Vec<Expr> },
    Fn { params: Vec<Pattern>, body: Box<Expr> },
    Match(Pattern, Box<Expr>),
    Seq(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }
}

impl Pattern {
    pub fn new(kind: PatternKind, span: Span) -> Self {
        Pattern { kind, span }
    }

    /// Variables bound by this pattern, in left-to-right order of first
    /// occurrence.
    pub fn bound_vars(&self) -> Vec<&str> {
        fn go<'a>(p: &'a Pattern, out: &mut Vec<&'a str>) {
            match &p.kind {
                PatternKind::Var(x) => {
                    if !out.contains(&x.as_str()) {
                        out.push(x);
                    }
                }
                PatternKind::Tuple(ps) => ps.iter().for_each(|p| go(p, out)),
                PatternKind::Cons(h, t) => {
                    go(h, out);
                    go(t, out);
                }
                PatternKind::Map(es) => es.iter().for_each(|(_, p)| go(p, out)),
                PatternKind::Wildcard
                | PatternKind::Lit(_)
                | PatternKind::Pin(_)
                | PatternKind::EmptyList => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecDecl {
    pub name: String,
    pub params: Vec<Type>,
    pub result: Type,
    pub span: Span,
}

impl SpecDecl {
    pub fn fn_type(&self) -> Type {
        Type::fun(self.params.clone(), self.result.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionClause {
    pub name: String,
    pub params: Vec<Pattern>,
    pub body: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Module {
    /// `defmodule Base.Math` has segments `["Base", "Math"]`.
    pub name: Vec<String>,
    pub body: Vec<Item>,
    pub span: Span,
}

/// A form appearing in a program or a module body. Consecutive expression
/// statements are grouped into one (possibly sequenced) `Expr` item.
#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Module(Module),
    Spec(SpecDecl),
    Def(FunctionClause),
    Expr(Expr),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub items: Vec<Item>,
}

impl Spanned for Expr {
    fn span(&self) -> Span {
        self.span
    }
}

impl Spanned for Pattern {
    fn span(&self) -> Span {
        self.span
    }
}

impl Spanned for SpecDecl {
    fn span(&self) -> Span {
        self.span
    }
}

impl Spanned for FunctionClause {
    fn span(&self) -> Span {
        self.span
    }
}

impl Spanned for Module {
    fn span(&self) -> Span {
        self.span
    }
}

impl Spanned for Item {
    fn span(&self) -> Span {
        match self {
            Item::Module(m) => m.span,
            Item::Spec(s) => s.span,
            Item::Def(d) => d.span,
            Item::Expr(e) => e.span,
        }
    }
}

/// Resetting every recorded span to the default, for comparing trees
/// structurally.
pub trait EraseSpans {
    fn erase_spans(&mut self);
}

impl EraseSpans for Pattern {
    fn erase_spans(&mut self) {
        self.span = Span::default();
        match &mut self.kind {
            PatternKind::Tuple(ps) => ps.iter_mut().for_each(EraseSpans::erase_spans),
            PatternKind::Cons(h, t) => {
                h.erase_spans();
                t.erase_spans();
            }
            PatternKind::Map(es) => es.iter_mut().for_each(|(_, p)| p.erase_spans()),
            _ => {}
        }
    }
}

impl EraseSpans for Expr {
    fn erase_spans(&mut self) {
        self.span = Span::default();
        match &mut self.kind {
            ExprKind::Lit(_) | ExprKind::Var(_) | ExprKind::EmptyList => {}
            ExprKind::Tuple(es) => es.iter_mut().for_each(EraseSpans::erase_spans),
            ExprKind::Cons(a, b) | ExprKind::Binary(_, a, b) | ExprKind::Seq(a, b) => {
                a.erase_spans();
                b.erase_spans();
            }
            ExprKind::Map(es) => es.iter_mut().for_each(|(_, e)| e.erase_spans()),
            ExprKind::Access(e, _) | ExprKind::Unary(_, e) => e.erase_spans(),
            ExprKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                cond.erase_spans();
                then_branch.erase_spans();
                else_branch.erase_spans();
            }
            ExprKind::Case(sel, clauses) => {
                sel.erase_spans();
                for c in clauses {
                    c.pattern.erase_spans();
                    c.body.erase_spans();
                }
            }
            ExprKind::Cond(clauses) => {
                for c in clauses {
                    c.cond.erase_spans();
                    c.body.erase_spans();
                }
            }
            ExprKind::Call { args, .. } | ExprKind::VarCall { args, .. } => {
                args.iter_mut().for_each(EraseSpans::erase_spans)
            }
            ExprKind::Fn { params, body } => {
                params.iter_mut().for_each(EraseSpans::erase_spans);
                body.erase_spans();
            }
            ExprKind::Match(p, e) => {
                p.erase_spans();
                e.erase_spans();
            }
        }
    }
}

impl EraseSpans for Item {
    fn erase_spans(&mut self) {
        match self {
            Item::Module(m) => {
                m.span = Span::default();
                m.body.iter_mut().for_each(EraseSpans::erase_spans);
            }
            Item::Spec(s) => s.span = Span::default(),
            Item::Def(d) => {
                d.span = Span::default();
                d.params.iter_mut().for_each(EraseSpans::erase_spans);
                d.body.erase_spans();
            }
            Item::Expr(e) => e.erase_spans(),
        }
    }
}

impl EraseSpans for Program {
    fn erase_spans(&mut self) {
        self.items.iter_mut().for_each(EraseSpans::erase_spans);
    }
}
