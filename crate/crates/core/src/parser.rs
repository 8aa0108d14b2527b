//! Recursive-descent parser for programs, patterns and `@spec` types.
//!
//! Expressions use precedence climbing over the binary operators, from
//! loosest to tightest:
//!
//! | level | operators                                  | assoc |
//! |-------|--------------------------------------------|-------|
//! | 1     | `or`                                       | left  |
//! | 2     | `and`                                      | left  |
//! | 3     | `< > <= >= == != === !==`                  | left  |
//! | 4     | `++ -- <>`                                 | right |
//! | 5     | `+ -`                                      | left  |
//! | 6     | `* /`                                      | left  |
//!
//! Unary `-` and `not` bind tighter than all of them; the match operator
//! `=` binds looser and associates to the right. Whether a statement is a
//! match is decided by scanning ahead for an `=` at bracket depth zero, so
//! the left-hand side can be parsed directly as a pattern.
//!
//! Newlines and `;` separate statements. A newline directly after a binary
//! operator, an opening bracket or a comma does not.

use thiserror::Error;

use crate::ast::*;
use crate::lexer::{tokenize, Keyword, LexError, Token, TokenKind};
use crate::span::Span;

#[derive(Clone, Debug, Error, PartialEq)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
    pub span: Span,
}

/// Either phase of turning text into syntax.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum SyntaxError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::Lex(e) => e.span,
            SyntaxError::Parse(e) => e.span,
        }
    }
}

pub fn parse_source(source: &str) -> Result<Program, SyntaxError> {
    Ok(parse_program(tokenize(source)?)?)
}

/// Parses a single expression (or statement sequence) from text.
pub fn parse_expression(source: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser::new(tokenize(source)?);
    let e = p.parse_block(BlockEnd::Eof)?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_pattern(source: &str) -> Result<Pattern, SyntaxError> {
    let mut p = Parser::new(tokenize(source)?);
    p.skip_separators();
    let pat = p.pattern()?;
    p.skip_separators();
    p.expect_eof()?;
    Ok(pat)
}

pub fn parse_type(source: &str) -> Result<Type, SyntaxError> {
    let mut p = Parser::new(tokenize(source)?);
    p.skip_separators();
    let t = p.ty()?;
    p.skip_separators();
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_program(tokens: Vec<Token>) -> Result<Program, ParseError> {
    let mut p = Parser::new(tokens);
    let items = p.items(false)?;
    p.expect_eof()?;
    Ok(Program { items })
}

/// Parses one `@spec` declaration; the stream must begin at `@`.
pub fn parse_spec(tokens: Vec<Token>) -> Result<SpecDecl, ParseError> {
    let mut p = Parser::new(tokens);
    let spec = p.spec()?;
    p.skip_separators();
    p.expect_eof()?;
    Ok(spec)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BlockEnd {
    /// `end`
    End,
    /// `else` or `end`
    Else,
    /// `end` or the head of the next `->` clause
    Clause,
    Eof,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    last: Span,
}

fn binop(kind: &TokenKind) -> Option<(BinOp, u8, bool)> {
    let op = match kind {
        TokenKind::Keyword(Keyword::Or) => BinOp::Or,
        TokenKind::Keyword(Keyword::And) => BinOp::And,
        TokenKind::Op(o) => match *o {
            "<" => BinOp::Lt,
            ">" => BinOp::Gt,
            "<=" => BinOp::Le,
            ">=" => BinOp::Ge,
            "==" => BinOp::Eq,
            "!=" => BinOp::Ne,
            "===" => BinOp::StrictEq,
            "!==" => BinOp::StrictNe,
            "++" => BinOp::ListConcat,
            "--" => BinOp::ListDiff,
            "<>" => BinOp::StrConcat,
            "+" => BinOp::Add,
            "-" => BinOp::Sub,
            "*" => BinOp::Mul,
            "/" => BinOp::Div,
            _ => return None,
        },
        _ => return None,
    };
    Some((op, precedence(op), right_assoc(op)))
}

pub(crate) fn precedence(op: BinOp) -> u8 {
    match op {
        BinOp::Or => 1,
        BinOp::And => 2,
        BinOp::Lt
        | BinOp::Gt
        | BinOp::Le
        | BinOp::Ge
        | BinOp::Eq
        | BinOp::Ne
        | BinOp::StrictEq
        | BinOp::StrictNe => 3,
        BinOp::ListConcat | BinOp::ListDiff | BinOp::StrConcat => 4,
        BinOp::Add | BinOp::Sub => 5,
        BinOp::Mul | BinOp::Div => 6,
    }
}

pub(crate) fn right_assoc(op: BinOp) -> bool {
    precedence(op) == 4
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            last: Span::default(),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn kind(&self) -> &TokenKind {
        &self.peek().kind
    }

    fn nth_kind(&self, n: usize) -> &TokenKind {
        &self.tokens[(self.pos + n).min(self.tokens.len() - 1)].kind
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        self.last = t.span;
        t
    }

    fn at_op(&self, op: &str) -> bool {
        matches!(self.kind(), TokenKind::Op(o) if *o == op)
    }

    fn at_kw(&self, kw: Keyword) -> bool {
        matches!(self.kind(), TokenKind::Keyword(k) if *k == kw)
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.at_op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn skip_newlines(&mut self) {
        while matches!(self.kind(), TokenKind::Newline) {
            self.bump();
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.kind(), TokenKind::Newline) || self.at_op(";") {
            self.bump();
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        let tok = self.peek();
        ParseError {
            message: format!("expected {expected}, found {}", tok.kind),
            span: tok.span,
        }
    }

    fn expect_op(&mut self, op: &str) -> Result<Span, ParseError> {
        if self.at_op(op) {
            Ok(self.bump().span)
        } else {
            Err(self.error(&format!("`{op}`")))
        }
    }

    fn expect_kw(&mut self, kw: Keyword) -> Result<Span, ParseError> {
        if self.at_kw(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.error(&format!("`{}`", kw.as_str())))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        match self.kind() {
            TokenKind::Eof => Ok(()),
            _ => Err(self.error("end of input")),
        }
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.kind().clone() {
            TokenKind::Ident(name) => Ok((name, self.bump().span)),
            _ => Err(self.error("an identifier")),
        }
    }

    /// Scans forward from the current token for `target` at bracket depth
    /// zero, stopping at the end of the current statement or clause.
    fn scan_for(&self, target: &str) -> bool {
        let mut depth = 0usize;
        for tok in &self.tokens[self.pos..] {
            match &tok.kind {
                TokenKind::Op(o) if *o == target && depth == 0 => return true,
                TokenKind::Op("(" | "[" | "{") | TokenKind::Keyword(Keyword::Do | Keyword::Fn) => {
                    depth += 1
                }
                TokenKind::Op(")" | "]" | "}") | TokenKind::Keyword(Keyword::End) => {
                    if depth == 0 {
                        return false;
                    }
                    depth -= 1;
                }
                TokenKind::Op(";" | "," | "->" | "|" | "=>")
                | TokenKind::Newline
                | TokenKind::Keyword(Keyword::Else)
                    if depth == 0 =>
                {
                    return false
                }
                TokenKind::Eof => return false,
                _ => {}
            }
        }
        false
    }

    fn at_clause_head(&self) -> bool {
        self.scan_for("->")
    }

    // ---- program structure ------------------------------------------------

    fn items(&mut self, in_module: bool) -> Result<Vec<Item>, ParseError> {
        let mut items = Vec::new();
        loop {
            self.skip_separators();
            match self.kind() {
                TokenKind::Eof => break,
                TokenKind::Keyword(Keyword::End) if in_module => break,
                TokenKind::Keyword(Keyword::Defmodule) => items.push(Item::Module(self.module()?)),
                TokenKind::Keyword(Keyword::Def) => items.push(Item::Def(self.def()?)),
                TokenKind::Op("@") => items.push(Item::Spec(self.spec()?)),
                _ => {
                    let mut stmts = Vec::new();
                    loop {
                        stmts.push(self.statement(if in_module {
                            BlockEnd::End
                        } else {
                            BlockEnd::Eof
                        })?);
                        self.skip_separators();
                        match self.kind() {
                            TokenKind::Eof
                            | TokenKind::Keyword(Keyword::End | Keyword::Defmodule | Keyword::Def)
                            | TokenKind::Op("@") => break,
                            _ => {}
                        }
                    }
                    items.push(Item::Expr(sequence(stmts)));
                }
            }
        }
        Ok(items)
    }

    fn module(&mut self) -> Result<Module, ParseError> {
        let start = self.expect_kw(Keyword::Defmodule)?;
        let mut name = Vec::new();
        loop {
            match self.kind().clone() {
                TokenKind::Alias(seg) => {
                    self.bump();
                    name.push(seg);
                }
                _ => return Err(self.error("a module name")),
            }
            if !self.eat_op(".") {
                break;
            }
        }
        self.expect_kw(Keyword::Do)?;
        let body = self.items(true)?;
        let end = self.expect_kw(Keyword::End)?;
        Ok(Module {
            name,
            body,
            span: start.to(end),
        })
    }

    fn spec(&mut self) -> Result<SpecDecl, ParseError> {
        let start = self.expect_op("@")?;
        match self.kind() {
            TokenKind::Ident(a) if a == "spec" => {
                self.bump();
            }
            _ => return Err(self.error("`spec` after `@`")),
        }
        let (name, _) = self.ident()?;
        let mut params = Vec::new();
        if self.eat_op("(") {
            self.skip_newlines();
            if !self.eat_op(")") {
                loop {
                    params.push(self.ty()?);
                    self.skip_newlines();
                    if self.eat_op(")") {
                        break;
                    }
                    self.expect_op(",")?;
                    self.skip_newlines();
                }
            }
        }
        self.expect_op("::")?;
        let result = self.ty()?;
        Ok(SpecDecl {
            name,
            params,
            result,
            span: start.to(self.last),
        })
    }

    fn def(&mut self) -> Result<FunctionClause, ParseError> {
        let start = self.expect_kw(Keyword::Def)?;
        let (name, _) = self.ident()?;
        let mut params = Vec::new();
        if self.eat_op("(") {
            self.skip_newlines();
            if !self.eat_op(")") {
                loop {
                    params.push(self.pattern()?);
                    self.skip_newlines();
                    if self.eat_op(")") {
                        break;
                    }
                    self.expect_op(",")?;
                    self.skip_newlines();
                }
            }
        }
        self.expect_kw(Keyword::Do)?;
        let body = self.parse_block(BlockEnd::End)?;
        let end = self.expect_kw(Keyword::End)?;
        Ok(FunctionClause {
            name,
            params,
            body,
            span: start.to(end),
        })
    }

    // ---- blocks and statements --------------------------------------------

    fn block_done(&self, end: BlockEnd) -> bool {
        match (end, self.kind()) {
            (_, TokenKind::Eof) => true,
            (BlockEnd::Eof, _) => false,
            (_, TokenKind::Keyword(Keyword::End)) => true,
            (BlockEnd::Else, TokenKind::Keyword(Keyword::Else)) => true,
            (BlockEnd::Clause, _) => self.at_clause_head(),
            _ => false,
        }
    }

    /// One or more statements, combined into a right-nested sequence.
    fn parse_block(&mut self, end: BlockEnd) -> Result<Expr, ParseError> {
        let mut stmts = Vec::new();
        loop {
            self.skip_separators();
            if self.block_done(end) {
                break;
            }
            stmts.push(self.statement(end)?);
        }
        if stmts.is_empty() {
            return Err(self.error("an expression"));
        }
        Ok(sequence(stmts))
    }

    fn statement(&mut self, end: BlockEnd) -> Result<Expr, ParseError> {
        let e = self.expr()?;
        match self.kind() {
            TokenKind::Newline | TokenKind::Op(";") | TokenKind::Eof => Ok(e),
            TokenKind::Keyword(Keyword::End) if end != BlockEnd::Eof => Ok(e),
            TokenKind::Keyword(Keyword::Else) if end == BlockEnd::Else => Ok(e),
            _ => Err(self.error("a newline or `;`")),
        }
    }

    // ---- expressions ------------------------------------------------------

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if !self.scan_for("=") {
            return self.binary(0);
        }
        let pat = self.pattern()?;
        if !self.at_op("=") {
            let tok = self.peek();
            return Err(ParseError {
                message: format!(
                    "the left side of `=` must be a pattern, found {} after it",
                    tok.kind
                ),
                span: tok.span,
            });
        }
        self.bump();
        self.skip_newlines();
        let rhs = self.expr()?;
        let span = pat.span.to(rhs.span);
        Ok(Expr::new(ExprKind::Match(pat, Box::new(rhs)), span))
    }

    fn binary(&mut self, min_prec: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some((op, prec, right)) = binop(self.kind()) {
            if prec < min_prec {
                break;
            }
            self.bump();
            self.skip_newlines();
            let rhs = self.binary(if right { prec } else { prec + 1 })?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let op = if self.at_op("-") {
            UnOp::Neg
        } else if self.at_kw(Keyword::Not) {
            UnOp::Not
        } else {
            return self.postfix();
        };
        let start = self.bump().span;
        let operand = self.unary()?;
        let span = start.to(operand.span);
        Ok(Expr::new(ExprKind::Unary(op, Box::new(operand)), span))
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.primary()?;
        // `m[k]` only when the bracket touches the expression
        while self.at_op("[") && self.peek().span.start == e.span.end {
            self.bump();
            let (key, _) = self.key()?;
            let close = self.expect_op("]")?;
            let span = e.span.to(close);
            e = Expr::new(ExprKind::Access(Box::new(e), key), span);
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let tok = self.peek().clone();
        let lit = |l: Literal| Ok(Expr::new(ExprKind::Lit(l), tok.span));
        match tok.kind {
            TokenKind::Int(i) => {
                self.bump();
                lit(Literal::Int(i))
            }
            TokenKind::Float(x) => {
                self.bump();
                lit(Literal::Float(x))
            }
            TokenKind::Str(s) => {
                self.bump();
                lit(Literal::Str(s))
            }
            TokenKind::Atom(a) => {
                self.bump();
                lit(Literal::Atom(a))
            }
            TokenKind::Keyword(Keyword::True) => {
                self.bump();
                lit(Literal::Bool(true))
            }
            TokenKind::Keyword(Keyword::False) => {
                self.bump();
                lit(Literal::Bool(false))
            }
            TokenKind::Keyword(Keyword::Nil) => {
                self.bump();
                lit(Literal::Atom("nil".into()))
            }
            TokenKind::Ident(name) => {
                self.bump();
                if self.at_op("(") {
                    let (args, close) = self.args()?;
                    let kind = ExprKind::Call {
                        qualifier: Vec::new(),
                        name,
                        args,
                    };
                    Ok(Expr::new(kind, tok.span.to(close)))
                } else if self.at_op(".") && matches!(self.nth_kind(1), TokenKind::Op("(")) {
                    self.bump();
                    let (args, close) = self.args()?;
                    Ok(Expr::new(ExprKind::VarCall { var: name, args }, tok.span.to(close)))
                } else {
                    Ok(Expr::new(ExprKind::Var(name), tok.span))
                }
            }
            TokenKind::Alias(_) => self.remote_call(),
            TokenKind::Op("(") => {
                self.bump();
                self.skip_newlines();
                let mut e = self.expr()?;
                self.skip_newlines();
                let close = self.expect_op(")")?;
                e.span = tok.span.to(close);
                Ok(e)
            }
            TokenKind::Op("{") => {
                self.bump();
                let (elems, close) = self.delimited("}", Self::expr)?;
                Ok(Expr::new(ExprKind::Tuple(elems), tok.span.to(close)))
            }
            TokenKind::Op("[") => self.list_expr(),
            TokenKind::Op("%") => {
                self.bump();
                self.expect_op("{")?;
                let (entries, close) = self.map_entries(Self::expr)?;
                Ok(Expr::new(ExprKind::Map(entries), tok.span.to(close)))
            }
            TokenKind::Keyword(Keyword::If) => self.if_expr(),
            TokenKind::Keyword(Keyword::Case) => self.case_expr(),
            TokenKind::Keyword(Keyword::Cond) => self.cond_expr(),
            TokenKind::Keyword(Keyword::Fn) => self.fn_expr(),
            _ => Err(self.error("an expression")),
        }
    }

    fn remote_call(&mut self) -> Result<Expr, ParseError> {
        let start = self.peek().span;
        let mut qualifier = Vec::new();
        loop {
            match self.kind().clone() {
                TokenKind::Alias(seg) => {
                    self.bump();
                    qualifier.push(seg);
                }
                TokenKind::Ident(name) if !qualifier.is_empty() => {
                    self.bump();
                    if !self.at_op("(") {
                        return Err(self.error("`(` to call a remote function"));
                    }
                    let (args, close) = self.args()?;
                    let kind = ExprKind::Call {
                        qualifier,
                        name,
                        args,
                    };
                    return Ok(Expr::new(kind, start.to(close)));
                }
                _ => return Err(self.error("a function name")),
            }
            self.expect_op(".")?;
        }
    }

    fn args(&mut self) -> Result<(Vec<Expr>, Span), ParseError> {
        self.expect_op("(")?;
        self.delimited(")", Self::expr)
    }

    /// Comma-separated items up to `close`; the opener is already consumed.
    fn delimited<T>(
        &mut self,
        close: &str,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<(Vec<T>, Span), ParseError> {
        let mut out = Vec::new();
        self.skip_newlines();
        if self.at_op(close) {
            return Ok((out, self.bump().span));
        }
        loop {
            out.push(item(self)?);
            self.skip_newlines();
            if self.at_op(close) {
                return Ok((out, self.bump().span));
            }
            self.expect_op(",")?;
            self.skip_newlines();
        }
    }

    fn key(&mut self) -> Result<(Key, Span), ParseError> {
        let tok = self.peek().clone();
        let key = match tok.kind {
            TokenKind::Atom(a) => Key::Atom(a),
            TokenKind::Keyword(Keyword::True) => Key::Bool(true),
            TokenKind::Keyword(Keyword::False) => Key::Bool(false),
            TokenKind::Keyword(Keyword::Nil) => Key::Atom("nil".into()),
            TokenKind::Int(i) => Key::Int(i),
            TokenKind::Op("-") => {
                if let TokenKind::Int(i) = *self.nth_kind(1) {
                    self.bump();
                    let t = self.bump();
                    return Ok((Key::Int(-i), tok.span.to(t.span)));
                }
                return Err(self.error("a map key (atom, boolean or integer)"));
            }
            _ => return Err(self.error("a map key (atom, boolean or integer)")),
        };
        self.bump();
        Ok((key, tok.span))
    }

    fn map_entries<T>(
        &mut self,
        mut value: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<(Vec<(Key, T)>, Span), ParseError> {
        let mut seen: Vec<Key> = Vec::new();
        self.delimited("}", |p| {
            let (key, span) = p.key()?;
            if seen.contains(&key) {
                return Err(ParseError {
                    message: format!("duplicate map key `{key}`"),
                    span,
                });
            }
            seen.push(key.clone());
            p.skip_newlines();
            p.expect_op("=>")?;
            p.skip_newlines();
            Ok((key, value(p)?))
        })
    }

    fn list_expr(&mut self) -> Result<Expr, ParseError> {
        let open = self.expect_op("[")?;
        self.skip_newlines();
        if self.at_op("]") {
            let close = self.bump().span;
            return Ok(Expr::new(ExprKind::EmptyList, open.to(close)));
        }
        let mut heads = Vec::new();
        let tail;
        loop {
            heads.push(self.expr()?);
            self.skip_newlines();
            if self.eat_op(",") {
                self.skip_newlines();
                continue;
            }
            if self.eat_op("|") {
                self.skip_newlines();
                let t = self.expr()?;
                self.skip_newlines();
                self.expect_op("]")?;
                tail = t;
            } else {
                let close = self.expect_op("]")?;
                tail = Expr::new(ExprKind::EmptyList, close);
            }
            break;
        }
        let close = self.last;
        let mut out = tail;
        let n = heads.len();
        for (i, h) in heads.into_iter().rev().enumerate() {
            let start = if i + 1 == n { open } else { h.span };
            let span = start.to(close);
            out = Expr::new(ExprKind::Cons(Box::new(h), Box::new(out)), span);
        }
        Ok(out)
    }

    fn if_expr(&mut self) -> Result<Expr, ParseError> {
        let kw = self.expect_kw(Keyword::If)?;
        let cond = self.expr()?;
        self.expect_kw(Keyword::Do)?;
        let then_branch = self.parse_block(BlockEnd::Else)?;
        let else_branch = if self.at_kw(Keyword::Else) {
            self.bump();
            self.parse_block(BlockEnd::End)?
        } else {
            // else-less `if` evaluates to nil when the condition fails
            Expr::new(ExprKind::Lit(Literal::Atom("nil".into())), kw)
        };
        let end = self.expect_kw(Keyword::End)?;
        Ok(Expr::new(
            ExprKind::If {
                cond: Box::new(cond),
                then_branch: Box::new(then_branch),
                else_branch: Box::new(else_branch),
            },
            kw.to(end),
        ))
    }

    fn case_expr(&mut self) -> Result<Expr, ParseError> {
        let kw = self.expect_kw(Keyword::Case)?;
        let selector = self.expr()?;
        self.expect_kw(Keyword::Do)?;
        let mut clauses = Vec::new();
        loop {
            self.skip_separators();
            if self.at_kw(Keyword::End) && !clauses.is_empty() {
                break;
            }
            let pattern = self.pattern()?;
            self.skip_newlines();
            self.expect_op("->")?;
            let body = self.parse_block(BlockEnd::Clause)?;
            clauses.push(CaseClause { pattern, body });
        }
        let end = self.expect_kw(Keyword::End)?;
        Ok(Expr::new(ExprKind::Case(Box::new(selector), clauses), kw.to(end)))
    }

    fn cond_expr(&mut self) -> Result<Expr, ParseError> {
        let kw = self.expect_kw(Keyword::Cond)?;
        self.expect_kw(Keyword::Do)?;
        let mut clauses = Vec::new();
        loop {
            self.skip_separators();
            if self.at_kw(Keyword::End) && !clauses.is_empty() {
                break;
            }
            let cond = self.expr()?;
            self.skip_newlines();
            self.expect_op("->")?;
            let body = self.parse_block(BlockEnd::Clause)?;
            clauses.push(CondClause { cond, body });
        }
        let end = self.expect_kw(Keyword::End)?;
        Ok(Expr::new(ExprKind::Cond(clauses), kw.to(end)))
    }

    fn fn_expr(&mut self) -> Result<Expr, ParseError> {
        let kw = self.expect_kw(Keyword::Fn)?;
        let params = if self.at_op("(") {
            self.bump();
            self.delimited(")", Self::pattern)?.0
        } else if self.at_op("->") {
            Vec::new()
        } else {
            let mut ps = vec![self.pattern()?];
            while self.eat_op(",") {
                self.skip_newlines();
                ps.push(self.pattern()?);
            }
            ps
        };
        self.expect_op("->")?;
        let body = self.parse_block(BlockEnd::End)?;
        let end = self.expect_kw(Keyword::End)?;
        Ok(Expr::new(
            ExprKind::Fn {
                params,
                body: Box::new(body),
            },
            kw.to(end),
        ))
    }

    // ---- patterns ---------------------------------------------------------

    fn pattern(&mut self) -> Result<Pattern, ParseError> {
        let tok = self.peek().clone();
        let lit = |p: &mut Self, l: Literal| {
            p.bump();
            Ok(Pattern::new(PatternKind::Lit(l), tok.span))
        };
        match tok.kind {
            TokenKind::Ident(name) => {
                self.bump();
                let kind = if name == "_" {
                    PatternKind::Wildcard
                } else {
                    PatternKind::Var(name)
                };
                Ok(Pattern::new(kind, tok.span))
            }
            TokenKind::Op("^") => {
                self.bump();
                let (name, span) = self.ident()?;
                Ok(Pattern::new(PatternKind::Pin(name), tok.span.to(span)))
            }
            TokenKind::Int(i) => lit(self, Literal::Int(i)),
            TokenKind::Float(x) => lit(self, Literal::Float(x)),
            TokenKind::Str(s) => lit(self, Literal::Str(s)),
            TokenKind::Atom(a) => lit(self, Literal::Atom(a)),
            TokenKind::Keyword(Keyword::True) => lit(self, Literal::Bool(true)),
            TokenKind::Keyword(Keyword::False) => lit(self, Literal::Bool(false)),
            TokenKind::Keyword(Keyword::Nil) => lit(self, Literal::Atom("nil".into())),
            TokenKind::Op("-") => {
                let l = match *self.nth_kind(1) {
                    TokenKind::Int(i) => Literal::Int(-i),
                    TokenKind::Float(x) => Literal::Float(-x),
                    _ => {
                        self.bump();
                        return Err(self.error("a number after `-` in a pattern"));
                    }
                };
                self.bump();
                let num = self.bump();
                Ok(Pattern::new(PatternKind::Lit(l), tok.span.to(num.span)))
            }
            TokenKind::Op("(") => {
                self.bump();
                self.skip_newlines();
                let mut p = self.pattern()?;
                self.skip_newlines();
                let close = self.expect_op(")")?;
                p.span = tok.span.to(close);
                Ok(p)
            }
            TokenKind::Op("{") => {
                self.bump();
                let (elems, close) = self.delimited("}", Self::pattern)?;
                Ok(Pattern::new(PatternKind::Tuple(elems), tok.span.to(close)))
            }
            TokenKind::Op("[") => self.list_pattern(),
            TokenKind::Op("%") => {
                self.bump();
                self.expect_op("{")?;
                let (entries, close) = self.map_entries(Self::pattern)?;
                Ok(Pattern::new(PatternKind::Map(entries), tok.span.to(close)))
            }
            _ => Err(self.error("a pattern")),
        }
    }

    fn list_pattern(&mut self) -> Result<Pattern, ParseError> {
        let open = self.expect_op("[")?;
        self.skip_newlines();
        if self.at_op("]") {
            let close = self.bump().span;
            return Ok(Pattern::new(PatternKind::EmptyList, open.to(close)));
        }
        let mut heads = Vec::new();
        let tail;
        loop {
            heads.push(self.pattern()?);
            self.skip_newlines();
            if self.eat_op(",") {
                self.skip_newlines();
                continue;
            }
            if self.eat_op("|") {
                self.skip_newlines();
                let t = self.pattern()?;
                self.skip_newlines();
                self.expect_op("]")?;
                tail = t;
            } else {
                let close = self.expect_op("]")?;
                tail = Pattern::new(PatternKind::EmptyList, close);
            }
            break;
        }
        let close = self.last;
        let mut out = tail;
        let n = heads.len();
        for (i, h) in heads.into_iter().rev().enumerate() {
            let start = if i + 1 == n { open } else { h.span };
            out = Pattern::new(PatternKind::Cons(Box::new(h), Box::new(out)), start.to(close));
        }
        Ok(out)
    }

    // ---- types ------------------------------------------------------------

    fn ty(&mut self) -> Result<Type, ParseError> {
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::Ident(name) => {
                let t = match name.as_str() {
                    "none" => Type::None,
                    "term" => Type::Term,
                    "any" => Type::Any,
                    "integer" => Type::Integer,
                    "float" => Type::Float,
                    "boolean" => Type::Boolean,
                    "string" => Type::String,
                    "atom" => Type::Atom,
                    _ => {
                        return Err(ParseError {
                            message: format!("unknown type `{name}`"),
                            span: tok.span,
                        })
                    }
                };
                self.bump();
                // `integer()` is the usual typespec spelling
                if self.at_op("(") && matches!(self.nth_kind(1), TokenKind::Op(")")) {
                    self.bump();
                    self.bump();
                }
                Ok(t)
            }
            TokenKind::Atom(a) => {
                self.bump();
                Ok(Type::AtomLit(a))
            }
            TokenKind::Keyword(Keyword::Nil) => {
                self.bump();
                Ok(Type::AtomLit("nil".into()))
            }
            TokenKind::Op("[") => {
                self.bump();
                self.skip_newlines();
                let elem = self.ty()?;
                self.skip_newlines();
                self.expect_op("]")?;
                Ok(Type::list(elem))
            }
            TokenKind::Op("{") => {
                self.bump();
                Ok(Type::Tuple(self.delimited("}", Self::ty)?.0))
            }
            TokenKind::Op("%") => {
                self.bump();
                self.expect_op("{")?;
                let (entries, _) = self.map_entries(Self::ty)?;
                Ok(Type::map(entries).expect("keys checked while parsing"))
            }
            TokenKind::Op("(") => {
                self.bump();
                let (params, _) = self.delimited(")", Self::ty)?;
                if self.eat_op("->") {
                    self.skip_newlines();
                    let result = self.ty()?;
                    Ok(Type::fun(params, result))
                } else if params.len() == 1 {
                    Ok(params.into_iter().next().unwrap())
                } else {
                    Err(self.error("`->` after a parameter type list"))
                }
            }
            _ => Err(self.error("a type")),
        }
    }
}

fn sequence(mut stmts: Vec<Expr>) -> Expr {
    let mut out = stmts.pop().expect("at least one statement");
    while let Some(prev) = stmts.pop() {
        let span = prev.span.to(out.span);
        out = Expr::new(ExprKind::Seq(Box::new(prev), Box::new(out)), span);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(src: &str) -> Expr {
        let mut e = parse_expression(src).unwrap();
        e.erase_spans();
        e
    }

    fn e(kind: ExprKind) -> Expr {
        Expr::new(kind, Span::default())
    }

    fn int(i: i64) -> Expr {
        e(ExprKind::Lit(Literal::Int(i)))
    }

    fn var(x: &str) -> Expr {
        e(ExprKind::Var(x.into()))
    }

    fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        e(ExprKind::Binary(op, Box::new(a), Box::new(b)))
    }

    fn pvar(x: &str) -> Pattern {
        Pattern::new(PatternKind::Var(x.into()), Span::default())
    }

    #[test]
    fn match_then_use_is_a_sequence() {
        let got = expr("x = 10 * 9\nx + 10");
        let want = e(ExprKind::Seq(
            Box::new(e(ExprKind::Match(
                pvar("x"),
                Box::new(bin(BinOp::Mul, int(10), int(9))),
            ))),
            Box::new(bin(BinOp::Add, var("x"), int(10))),
        ));
        assert_eq!(got, want);
    }

    #[test]
    fn multiplication_binds_tighter() {
        assert_eq!(
            expr("1 + 2 * 3"),
            bin(BinOp::Add, int(1), bin(BinOp::Mul, int(2), int(3)))
        );
        assert_eq!(
            expr("1 - 2 - 3"),
            bin(BinOp::Sub, bin(BinOp::Sub, int(1), int(2)), int(3))
        );
    }

    #[test]
    fn concat_operators_are_right_associative() {
        assert_eq!(
            expr("a ++ b ++ c"),
            bin(
                BinOp::ListConcat,
                var("a"),
                bin(BinOp::ListConcat, var("b"), var("c"))
            )
        );
    }

    #[test]
    fn unary_binds_tightest() {
        assert_eq!(
            expr("-x * 2"),
            bin(
                BinOp::Mul,
                e(ExprKind::Unary(UnOp::Neg, Box::new(var("x")))),
                int(2)
            )
        );
        assert_eq!(
            expr("not a and b"),
            bin(
                BinOp::And,
                e(ExprKind::Unary(UnOp::Not, Box::new(var("a")))),
                var("b")
            )
        );
    }

    #[test]
    fn comparison_below_arithmetic_above_boolean() {
        assert_eq!(
            expr("a + 1 > b or c"),
            bin(
                BinOp::Or,
                bin(BinOp::Gt, bin(BinOp::Add, var("a"), int(1)), var("b")),
                var("c")
            )
        );
    }

    #[test]
    fn match_is_right_associative_and_lowest() {
        let got = expr("a = b = 1 + 2");
        let inner = e(ExprKind::Match(
            pvar("b"),
            Box::new(bin(BinOp::Add, int(1), int(2))),
        ));
        assert_eq!(got, e(ExprKind::Match(pvar("a"), Box::new(inner))));
    }

    #[test]
    fn non_pattern_left_of_match_is_a_syntax_error() {
        let err = parse_expression("1 + x = 3").unwrap_err();
        assert!(err.to_string().contains("pattern"), "{err}");
    }

    #[test]
    fn parenthesized_match_inside_operator() {
        let got = expr("(x = 3) + x");
        let m = e(ExprKind::Match(pvar("x"), Box::new(int(3))));
        assert_eq!(got, bin(BinOp::Add, m, var("x")));
    }

    #[test]
    fn newline_after_operator_continues() {
        assert_eq!(expr("1 +\n 2"), bin(BinOp::Add, int(1), int(2)));
        assert!(matches!(expr("1\n-2").kind, ExprKind::Seq(..)));
    }

    #[test]
    fn map_access_requires_adjacent_bracket() {
        assert!(matches!(expr("m[:a]").kind, ExprKind::Access(_, Key::Atom(_))));
        assert!(parse_expression("m [:a]").is_err());
    }

    #[test]
    fn list_sugar_desugars_to_cons() {
        let got = expr("[1, 2 | t]");
        let want = e(ExprKind::Cons(
            Box::new(int(1)),
            Box::new(e(ExprKind::Cons(Box::new(int(2)), Box::new(var("t"))))),
        ));
        assert_eq!(got, want);
        assert_eq!(expr("[1]"), expr("[1 | []]"));
    }

    #[test]
    fn else_less_if_gets_nil_at_if_keyword() {
        let e = parse_expression("if c do 1 end").unwrap();
        let ExprKind::If { else_branch, .. } = &e.kind else {
            panic!("not an if")
        };
        assert_eq!(else_branch.kind, ExprKind::Lit(Literal::Atom("nil".into())));
        assert_eq!((else_branch.span.start, else_branch.span.end), (0, 2));
    }

    #[test]
    fn case_clauses_split_on_semicolon_and_newline() {
        let a = expr("case :yes do :yes -> 1; :no -> 2 end");
        let b = expr("case :yes do\n  :yes -> 1\n  :no ->\n    2\nend");
        assert_eq!(a, b);
        let ExprKind::Case(_, clauses) = a.kind else {
            panic!()
        };
        assert_eq!(clauses.len(), 2);
    }

    #[test]
    fn case_clause_body_may_hold_several_statements() {
        let got = expr("case x do\n {a, b} ->\n  y = a\n  y + b\n _ -> 0\nend");
        let ExprKind::Case(_, clauses) = got.kind else {
            panic!()
        };
        assert_eq!(clauses.len(), 2);
        assert!(matches!(clauses[0].body.kind, ExprKind::Seq(..)));
    }

    #[test]
    fn fn_body_containing_arrow_inside_case() {
        let got = expr("f = fn (x) -> case x do 1 -> 2; _ -> 3 end end\nf.(8)");
        assert!(matches!(got.kind, ExprKind::Seq(..)));
    }

    #[test]
    fn qualified_and_var_calls() {
        let got = expr("Base.Math.dec(n)");
        assert_eq!(
            got,
            e(ExprKind::Call {
                qualifier: vec!["Base".into(), "Math".into()],
                name: "dec".into(),
                args: vec![var("n")]
            })
        );
        assert_eq!(
            expr("f.(8)"),
            e(ExprKind::VarCall {
                var: "f".into(),
                args: vec![int(8)]
            })
        );
    }

    #[test]
    fn nested_modules() {
        let src = "defmodule Base do\n  defmodule Math do\n    def dec(x) do x - 1 end\n  end\nend";
        let prog = parse_source(src).unwrap();
        let Item::Module(base) = &prog.items[0] else {
            panic!()
        };
        assert_eq!(base.name, vec!["Base"]);
        let Item::Module(math) = &base.body[0] else {
            panic!()
        };
        assert_eq!(math.name, vec!["Math"]);
        assert!(matches!(math.body[0], Item::Def(_)));
    }

    #[test]
    fn spec_types() {
        let parse = |s: &str| parse_spec(tokenize(s).unwrap()).unwrap();
        let s = parse("@spec func(integer) :: float");
        assert_eq!((s.params.clone(), s.result.clone()), (vec![Type::Integer], Type::Float));
        let s = parse("@spec length([any]) :: integer");
        assert_eq!(s.params, vec![Type::list(Type::Any)]);
        let s = parse("@spec f((integer) -> integer) :: integer");
        assert_eq!(s.params, vec![Type::fun(vec![Type::Integer], Type::Integer)]);
        let s = parse("@spec g() :: %{:a => {atom, :ok}, 1 => boolean}");
        assert!(s.params.is_empty());
        assert_eq!(s.result.to_string(), "%{:a => {atom, :ok}, 1 => boolean}");
    }

    #[test]
    fn spec_rejects_duplicate_map_keys() {
        let err = parse_spec(tokenize("@spec f(%{:a => integer, :a => float}) :: any").unwrap())
            .unwrap_err();
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn type_round_trips_through_display() {
        for src in [
            "(integer, [any]) -> {float, :ok}",
            "((integer) -> float) -> (atom) -> term",
            "%{:k => none, true => string}",
        ] {
            let t = parse_type(src).unwrap();
            assert_eq!(parse_type(&t.to_string()).unwrap(), t, "{src}");
        }
    }

    #[test]
    fn top_level_items_group_expression_runs() {
        let src = "@spec bad(any) :: integer; def bad(x) do if x do x else 2 end end\nx = 1\nx + 1";
        let prog = parse_source(src).unwrap();
        assert_eq!(prog.items.len(), 3);
        assert!(matches!(&prog.items[2], Item::Expr(e) if matches!(e.kind, ExprKind::Seq(..))));
    }

    #[test]
    fn syntax_error_reports_expected_token() {
        let err = parse_source("def f(x) do x").unwrap_err();
        assert!(err.to_string().contains("expected `end`"), "{err}");
    }
}
