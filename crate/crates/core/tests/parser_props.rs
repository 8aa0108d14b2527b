//! Printing a random tree and parsing it back gives the same tree, and
//! every parsed node's span encloses its children's.

use exgrad::ast::*;
use exgrad::parser::parse_type;
use exgrad::pretty::print_program;
use exgrad::span::{Span, Spanned};
use exgrad::parse_source;
use proptest::prelude::*;

fn sp() -> Span {
    Span::default()
}

fn var_name() -> impl Strategy<Value = String> {
    proptest::sample::select(vec!["x", "y", "zs", "acc", "n1", "_ignored"]).prop_map(String::from)
}

fn fn_name() -> impl Strategy<Value = String> {
    proptest::sample::select(vec!["f", "go", "size", "is_ok"]).prop_map(String::from)
}

fn module_name() -> impl Strategy<Value = Vec<String>> {
    proptest::collection::vec(proptest::sample::select(vec!["A", "Math", "Main"]), 1..3)
        .prop_map(|v| v.into_iter().map(String::from).collect())
}

fn key() -> impl Strategy<Value = Key> {
    prop_oneof![
        proptest::sample::select(vec!["a", "ok", "nil"]).prop_map(|a| Key::Atom(a.into())),
        any::<bool>().prop_map(Key::Bool),
        (-20i64..20).prop_map(Key::Int),
    ]
}

fn literal(allow_negative: bool) -> impl Strategy<Value = Literal> {
    let lo = if allow_negative { -50 } else { 0 };
    prop_oneof![
        (lo..1000i64).prop_map(Literal::Int),
        (lo..800i64).prop_map(|i| Literal::Float(i as f64 / 8.0)),
        "[a-z \"\\\\]{0,6}".prop_map(Literal::Str),
        any::<bool>().prop_map(Literal::Bool),
        proptest::sample::select(vec!["ok", "error", "nil"]).prop_map(|a| Literal::Atom(a.into())),
    ]
}

fn dedup_keys<T>(es: Vec<(Key, T)>) -> Vec<(Key, T)> {
    let mut out: Vec<(Key, T)> = Vec::new();
    for (k, v) in es {
        if !out.iter().any(|(k2, _)| *k2 == k) {
            out.push((k, v));
        }
    }
    out
}

fn pattern() -> impl Strategy<Value = Pattern> {
    let leaf = prop_oneof![
        Just(PatternKind::Wildcard),
        literal(true).prop_map(PatternKind::Lit),
        var_name().prop_filter("not a wildcard", |v| !v.starts_with('_')).prop_map(PatternKind::Var),
        var_name().prop_filter("not a wildcard", |v| !v.starts_with('_')).prop_map(PatternKind::Pin),
        Just(PatternKind::EmptyList),
    ]
    .prop_map(|k| Pattern::new(k, sp()));
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 0..3).prop_map(PatternKind::Tuple),
            (inner.clone(), inner.clone()).prop_map(|(h, t)| PatternKind::Cons(Box::new(h), Box::new(t))),
            proptest::collection::vec((key(), inner), 0..3).prop_map(|es| PatternKind::Map(dedup_keys(es))),
        ]
        .prop_map(|k| Pattern::new(k, sp()))
    })
}

fn binop() -> impl Strategy<Value = BinOp> {
    use BinOp::*;
    proptest::sample::select(vec![
        Add, Sub, Mul, Div, And, Or, Lt, Gt, Le, Ge, Eq, Ne, StrictEq, StrictNe, ListConcat, ListDiff, StrConcat,
    ])
}

/// Right-nested statement sequences with a non-sequence on the left.
fn seq(stmts: Vec<Expr>) -> Expr {
    let mut it = stmts.into_iter().rev();
    let last = it.next().expect("at least one statement");
    it.fold(last, |acc, s| Expr::new(ExprKind::Seq(Box::new(s), Box::new(acc)), sp()))
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        literal(false).prop_map(ExprKind::Lit),
        var_name().prop_filter("not a wildcard", |v| !v.starts_with('_')).prop_map(ExprKind::Var),
        Just(ExprKind::EmptyList),
    ]
    .prop_map(|k| Expr::new(k, sp()));
    leaf.prop_recursive(4, 48, 4, |inner| {
        let e = || inner.clone();
        let block = || proptest::collection::vec(inner.clone(), 1..3).prop_map(seq);
        prop_oneof![
            proptest::collection::vec(e(), 0..3).prop_map(ExprKind::Tuple),
            (e(), e()).prop_map(|(h, t)| ExprKind::Cons(Box::new(h), Box::new(t))),
            proptest::collection::vec((key(), e()), 0..3).prop_map(|es| ExprKind::Map(dedup_keys(es))),
            (e(), key()).prop_map(|(m, k)| ExprKind::Access(Box::new(m), k)),
            (binop(), e(), e()).prop_map(|(op, l, r)| ExprKind::Binary(op, Box::new(l), Box::new(r))),
            (prop_oneof![Just(UnOp::Neg), Just(UnOp::Not)], e()).prop_map(|(op, x)| ExprKind::Unary(op, Box::new(x))),
            (e(), block(), block()).prop_map(|(c, t, f)| ExprKind::If {
                cond: Box::new(c),
                then_branch: Box::new(t),
                else_branch: Box::new(f),
            }),
            (e(), proptest::collection::vec((pattern(), block()), 1..3)).prop_map(|(s, cs)| {
                ExprKind::Case(
                    Box::new(s),
                    cs.into_iter().map(|(pattern, body)| CaseClause { pattern, body }).collect(),
                )
            }),
            proptest::collection::vec((e(), block()), 1..3).prop_map(|cs| {
                ExprKind::Cond(cs.into_iter().map(|(cond, body)| CondClause { cond, body }).collect())
            }),
            (proptest::option::of(module_name()), fn_name(), proptest::collection::vec(e(), 0..3)).prop_map(
                |(q, name, args)| ExprKind::Call { qualifier: q.unwrap_or_default(), name, args }
            ),
            (var_name().prop_filter("named", |v| !v.starts_with('_')), proptest::collection::vec(e(), 0..3))
                .prop_map(|(var, args)| ExprKind::VarCall { var, args }),
            (proptest::collection::vec(pattern(), 1..3), block())
                .prop_map(|(params, body)| ExprKind::Fn { params, body: Box::new(body) }),
            (pattern(), e()).prop_map(|(p, r)| ExprKind::Match(p, Box::new(r))),
        ]
        .prop_map(|k| Expr::new(k, sp()))
    })
}

fn ty() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![
        Just(Type::None),
        Just(Type::Term),
        Just(Type::Any),
        Just(Type::Integer),
        Just(Type::Float),
        Just(Type::Boolean),
        Just(Type::String),
        Just(Type::Atom),
        proptest::sample::select(vec!["a", "ok"]).prop_map(Type::atom),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Type::list),
            proptest::collection::vec(inner.clone(), 0..3).prop_map(Type::Tuple),
            proptest::collection::vec((key(), inner.clone()), 0..3)
                .prop_map(|es| Type::map(dedup_keys(es)).expect("distinct keys")),
            (proptest::collection::vec(inner.clone(), 0..3), inner).prop_map(|(ps, r)| Type::fun(ps, r)),
        ]
    })
}

fn item() -> impl Strategy<Value = Item> {
    let spec = (fn_name(), proptest::collection::vec(ty(), 0..3), ty()).prop_map(|(name, params, result)| {
        Item::Spec(SpecDecl { name, params, result, span: sp() })
    });
    let def = (fn_name(), proptest::collection::vec(pattern(), 0..3), proptest::collection::vec(expr(), 1..3))
        .prop_map(|(name, params, body)| Item::Def(FunctionClause { name, params, body: seq(body), span: sp() }));
    let flat = prop_oneof![spec, def, expr().prop_map(Item::Expr)].boxed();
    let module = (module_name(), proptest::collection::vec(flat.clone(), 0..4))
        .prop_map(|(name, body)| Item::Module(Module { name, body: group_exprs(body), span: sp() }));
    prop_oneof![3 => flat, 1 => module]
}

/// Adjacent expression items are one item once parsed.
fn group_exprs(items: Vec<Item>) -> Vec<Item> {
    let mut out: Vec<Item> = Vec::new();
    for it in items {
        match (out.last_mut(), it) {
            (Some(Item::Expr(prev)), Item::Expr(e)) => {
                let mut stmts = Vec::new();
                flatten(prev, &mut stmts);
                stmts.push(e);
                *prev = seq(stmts);
            }
            (_, it) => out.push(it),
        }
    }
    out
}

fn flatten(e: &Expr, out: &mut Vec<Expr>) {
    match &e.kind {
        ExprKind::Seq(a, b) => {
            out.push((**a).clone());
            flatten(b, out);
        }
        _ => out.push(e.clone()),
    }
}

fn program() -> impl Strategy<Value = Program> {
    proptest::collection::vec(item(), 0..5).prop_map(|items| Program { items: group_exprs(items) })
}

fn expr_children(e: &Expr) -> (Vec<&Expr>, Vec<&Pattern>) {
    use ExprKind::*;
    match &e.kind {
        Lit(_) | Var(_) | EmptyList => (vec![], vec![]),
        Tuple(es) => (es.iter().collect(), vec![]),
        Cons(a, b) | Binary(_, a, b) | Seq(a, b) => (vec![a, b], vec![]),
        Map(es) => (es.iter().map(|(_, v)| v).collect(), vec![]),
        Access(m, _) | Unary(_, m) => (vec![m], vec![]),
        If { cond, then_branch, else_branch } => (vec![cond, then_branch, else_branch], vec![]),
        Case(s, cs) => {
            let mut es = vec![&**s];
            es.extend(cs.iter().map(|c| &c.body));
            (es, cs.iter().map(|c| &c.pattern).collect())
        }
        Cond(cs) => (cs.iter().flat_map(|c| [&c.cond, &c.body]).collect(), vec![]),
        Call { args, .. } | VarCall { args, .. } => (args.iter().collect(), vec![]),
        Fn { params, body } => (vec![body], params.iter().collect()),
        Match(p, r) => (vec![r], vec![p]),
    }
}

fn pattern_children(p: &Pattern) -> Vec<&Pattern> {
    match &p.kind {
        PatternKind::Tuple(ps) => ps.iter().collect(),
        PatternKind::Cons(h, t) => vec![h, t],
        PatternKind::Map(es) => es.iter().map(|(_, p)| p).collect(),
        _ => vec![],
    }
}

fn check_pattern_spans(p: &Pattern) -> Result<(), String> {
    for c in pattern_children(p) {
        if !p.span.contains(&c.span) {
            return Err(format!("pattern {:?} escapes {:?}", c.span, p.span));
        }
        check_pattern_spans(c)?;
    }
    Ok(())
}

fn check_expr_spans(e: &Expr) -> Result<(), String> {
    let (es, ps) = expr_children(e);
    for c in es {
        if !e.span.contains(&c.span) {
            return Err(format!("{:?} escapes {:?}", c.span, e.span));
        }
        check_expr_spans(c)?;
    }
    for p in ps {
        if !e.span.contains(&p.span) {
            return Err(format!("pattern {:?} escapes {:?}", p.span, e.span));
        }
        check_pattern_spans(p)?;
    }
    Ok(())
}

fn check_item_spans(items: &[Item]) -> Result<(), String> {
    for it in items {
        match it {
            Item::Module(m) => {
                for inner in &m.body {
                    if !m.span.contains(&inner.span()) {
                        return Err("module item escapes its module".into());
                    }
                }
                check_item_spans(&m.body)?;
            }
            Item::Def(d) => {
                check_expr_spans(&d.body)?;
                if !d.span.contains(&d.body.span) || !d.params.iter().all(|p| d.span.contains(&p.span)) {
                    return Err("def part escapes the def".into());
                }
            }
            Item::Expr(e) => check_expr_spans(e)?,
            Item::Spec(_) => {}
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn programs_round_trip(prog in program()) {
        let printed = print_program(&prog);
        let mut back = parse_source(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        back.erase_spans();
        prop_assert_eq!(back, prog, "{}", printed);
    }

    #[test]
    fn spans_nest(prog in program()) {
        let printed = print_program(&prog);
        let back = parse_source(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        check_item_spans(&back.items).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
    }

    #[test]
    fn types_round_trip(t in ty()) {
        let printed = t.to_string();
        prop_assert_eq!(parse_type(&printed).map_err(|e| TestCaseError::fail(format!("{e}: {printed}")))?, t);
    }

    #[test]
    fn parser_never_panics(src in "[a-z0-9 :%{}\\[\\]()|,=>^+*<\\-\n\"]{0,40}") {
        let _ = parse_source(&src);
    }
}
