//! Prints syntax trees back to source. Operators are fully parenthesized,
//! so the output re-parses to the same tree without relying on precedence.

use std::fmt::Write as _;

use crate::ast::*;

pub fn print_program(prog: &Program) -> String {
    let mut p = Printer::default();
    p.items(&prog.items);
    p.out
}

pub fn print_expr(e: &Expr) -> String {
    let mut p = Printer::default();
    p.block(e);
    p.out
}

pub fn print_pattern(pat: &Pattern) -> String {
    let mut out = String::new();
    pattern(&mut out, pat);
    out
}

pub fn print_literal(l: &Literal) -> String {
    match l {
        Literal::Int(i) => i.to_string(),
        Literal::Float(x) => {
            // `Display` for f64 never uses exponents; make sure a `.` is there
            let s = x.to_string();
            if s.contains('.') {
                s
            } else {
                format!("{s}.0")
            }
        }
        Literal::Str(s) => {
            let mut out = String::from("\"");
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    c => out.push(c),
                }
            }
            out.push('"');
            out
        }
        Literal::Bool(b) => b.to_string(),
        Literal::Atom(a) => format!(":{a}"),
    }
}

fn pattern(out: &mut String, p: &Pattern) {
    match &p.kind {
        PatternKind::Wildcard => out.push('_'),
        PatternKind::Lit(l) => out.push_str(&print_literal(l)),
        PatternKind::Var(x) => out.push_str(x),
        PatternKind::Pin(x) => {
            out.push('^');
            out.push_str(x);
        }
        PatternKind::Tuple(ps) => {
            out.push('{');
            for (i, q) in ps.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                pattern(out, q);
            }
            out.push('}');
        }
        PatternKind::EmptyList => out.push_str("[]"),
        PatternKind::Cons(h, t) => {
            out.push('[');
            pattern(out, h);
            out.push_str(" | ");
            pattern(out, t);
            out.push(']');
        }
        PatternKind::Map(es) => {
            out.push_str("%{");
            for (i, (k, q)) in es.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{k} => ");
                pattern(out, q);
            }
            out.push('}');
        }
    }
}

#[derive(Default)]
struct Printer {
    out: String,
    indent: usize,
}

impl Printer {
    fn newline(&mut self) {
        self.out.push('\n');
        for _ in 0..self.indent {
            self.out.push_str("  ");
        }
    }

    fn trim_end(&mut self) {
        let keep = self.out.trim_end().len();
        self.out.truncate(keep);
    }

    fn items(&mut self, items: &[Item]) {
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                self.newline();
            }
            match item {
                Item::Module(m) => {
                    let _ = write!(self.out, "defmodule {} do", m.name.join("."));
                    self.indent += 1;
                    self.newline();
                    self.items(&m.body);
                    self.indent -= 1;
                    self.newline();
                    self.out.push_str("end");
                }
                Item::Spec(s) => {
                    let params: Vec<String> = s.params.iter().map(Type::to_string).collect();
                    let _ = write!(self.out, "@spec {}({}) :: {}", s.name, params.join(", "), s.result);
                }
                Item::Def(d) => {
                    let params: Vec<String> = d.params.iter().map(print_pattern).collect();
                    let _ = write!(self.out, "def {}({}) do", d.name, params.join(", "));
                    self.body(&d.body);
                    self.out.push_str("end");
                }
                Item::Expr(e) => self.block(e),
            }
        }
    }

    /// An indented block on its own lines, leaving the cursor at the start
    /// of the closing line.
    fn body(&mut self, e: &Expr) {
        self.indent += 1;
        self.newline();
        self.block(e);
        self.indent -= 1;
        self.newline();
    }

    /// A statement sequence, one statement per line.
    fn block(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Seq(a, b) => {
                self.statement(a);
                self.newline();
                self.block(b);
            }
            _ => self.statement(e),
        }
    }

    fn statement(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Match(p, rhs) => {
                pattern(&mut self.out, p);
                self.out.push_str(" = ");
                self.statement(rhs);
            }
            _ => self.expr(e),
        }
    }

    fn exprs(&mut self, es: &[Expr]) {
        for (i, e) in es.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            self.expr(e);
        }
    }

    fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Lit(l) => self.out.push_str(&print_literal(l)),
            ExprKind::Var(x) => self.out.push_str(x),
            ExprKind::Tuple(es) => {
                self.out.push('{');
                self.exprs(es);
                self.out.push('}');
            }
            ExprKind::EmptyList => self.out.push_str("[]"),
            ExprKind::Cons(h, t) => {
                self.out.push('[');
                self.expr(h);
                self.out.push_str(" | ");
                self.expr(t);
                self.out.push(']');
            }
            ExprKind::Map(es) => {
                self.out.push_str("%{");
                for (i, (k, v)) in es.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    let _ = write!(self.out, "{k} => ");
                    self.expr(v);
                }
                self.out.push('}');
            }
            ExprKind::Access(m, k) => {
                self.out.push('(');
                self.expr(m);
                let _ = write!(self.out, ")[{k}]");
            }
            ExprKind::Binary(op, l, r) => {
                self.out.push('(');
                self.expr(l);
                let _ = write!(self.out, " {} ", op.as_str());
                self.expr(r);
                self.out.push(')');
            }
            ExprKind::Unary(op, x) => {
                self.out.push_str(match op {
                    UnOp::Neg => "(-",
                    UnOp::Not => "(not ",
                });
                self.expr(x);
                self.out.push(')');
            }
            ExprKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.out.push_str("if ");
                self.expr(cond);
                self.out.push_str(" do");
                self.body(then_branch);
                self.out.push_str("else");
                self.body(else_branch);
                self.out.push_str("end");
            }
            ExprKind::Case(sel, clauses) => {
                self.out.push_str("case ");
                self.expr(sel);
                self.out.push_str(" do");
                self.indent += 1;
                for c in clauses {
                    self.newline();
                    pattern(&mut self.out, &c.pattern);
                    self.out.push_str(" ->");
                    self.body(&c.body);
                    self.trim_end();
                }
                self.indent -= 1;
                self.newline();
                self.out.push_str("end");
            }
            ExprKind::Cond(clauses) => {
                self.out.push_str("cond do");
                self.indent += 1;
                for c in clauses {
                    self.newline();
                    self.expr(&c.cond);
                    self.out.push_str(" ->");
                    self.body(&c.body);
                    self.trim_end();
                }
                self.indent -= 1;
                self.newline();
                self.out.push_str("end");
            }
            ExprKind::Call {
                qualifier,
                name,
                args,
            } => {
                for q in qualifier {
                    let _ = write!(self.out, "{q}.");
                }
                let _ = write!(self.out, "{name}(");
                self.exprs(args);
                self.out.push(')');
            }
            ExprKind::VarCall { var, args } => {
                let _ = write!(self.out, "{var}.(");
                self.exprs(args);
                self.out.push(')');
            }
            ExprKind::Fn { params, body } => {
                let ps: Vec<String> = params.iter().map(print_pattern).collect();
                let _ = write!(self.out, "fn ({}) ->", ps.join(", "));
                self.body(body);
                self.out.push_str("end");
            }
            ExprKind::Match(p, rhs) => {
                self.out.push('(');
                pattern(&mut self.out, p);
                self.out.push_str(" = ");
                self.statement(rhs);
                self.out.push(')');
            }
            ExprKind::Seq(..) => {
                // sequences only occur in block position; print one anyway
                self.block(e);
            }
        }
    }
}
