//! Tokenizer.

use std::fmt;

use thiserror::Error;

use crate::span::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Keyword {
    Defmodule,
    Def,
    Do,
    End,
    Fn,
    If,
    Else,
    Case,
    Cond,
    And,
    Or,
    Not,
    True,
    False,
    Nil,
}

impl Keyword {
    fn from_ident(s: &str) -> Option<Keyword> {
        Some(match s {
            "defmodule" => Keyword::Defmodule,
            "def" => Keyword::Def,
            "do" => Keyword::Do,
            "end" => Keyword::End,
            "fn" => Keyword::Fn,
            "if" => Keyword::If,
            "else" => Keyword::Else,
            "case" => Keyword::Case,
            "cond" => Keyword::Cond,
            "and" => Keyword::And,
            "or" => Keyword::Or,
            "not" => Keyword::Not,
            "true" => Keyword::True,
            "false" => Keyword::False,
            "nil" => Keyword::Nil,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Defmodule => "defmodule",
            Keyword::Def => "def",
            Keyword::Do => "do",
            Keyword::End => "end",
            Keyword::Fn => "fn",
            Keyword::If => "if",
            Keyword::Else => "else",
            Keyword::Case => "case",
            Keyword::Cond => "cond",
            Keyword::And => "and",
            Keyword::Or => "or",
            Keyword::Not => "not",
            Keyword::True => "true",
            Keyword::False => "false",
            Keyword::Nil => "nil",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Keyword(Keyword),
    /// Lower-case identifier (variables, function names).
    Ident(String),
    /// Capitalized identifier (module names).
    Alias(String),
    Atom(String),
    Int(i64),
    Float(f64),
    Str(String),
    /// Operators and punctuation, by lexeme.
    Op(&'static str),
    Newline,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => write!(f, "`{}`", k.as_str()),
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Alias(s) => write!(f, "module name `{s}`"),
            TokenKind::Atom(s) => write!(f, "atom `:{s}`"),
            TokenKind::Int(i) => write!(f, "integer `{i}`"),
            TokenKind::Float(x) => write!(f, "float `{x:?}`"),
            TokenKind::Str(s) => write!(f, "string {s:?}"),
            TokenKind::Op(o) => write!(f, "`{o}`"),
            TokenKind::Newline => f.write_str("newline"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

#[derive(Clone, Debug, Error, PartialEq)]
#[error("{message}")]
pub struct LexError {
    pub message: String,
    pub span: Span,
}

/// Longest-first, so `===` is tried before `==` and `=`.
const OPERATORS: &[&str] = &[
    "===", "!==", "==", "!=", "<=", ">=", "<>", "++", "--", "::", "=>", "->", "+", "-", "*", "/",
    "<", ">", "=", "^", "|", ".", ",", ";", "(", ")", "[", "]", "{", "}", "%", "@",
];

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }

    fn span_from(&self, mark: (usize, u32, u32)) -> Span {
        Span::new(mark.0, self.pos, mark.1, mark.2, self.line, self.col)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_lowercase() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `source` into tokens. Comments and non-newline whitespace are
/// dropped; newlines are kept because they separate statements. The
/// stream always ends with an `Eof` token.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let mark = cur.mark();
        if c == '\n' {
            cur.bump();
            tokens.push(Token {
                kind: TokenKind::Newline,
                lexeme: "\n".into(),
                span: cur.span_from(mark),
            });
            continue;
        }
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }

        let kind = if is_ident_start(c) {
            let word = take_word(&mut cur);
            match Keyword::from_ident(&word) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Ident(word),
            }
        } else if c.is_ascii_uppercase() {
            TokenKind::Alias(take_word(&mut cur))
        } else if c.is_ascii_digit() {
            lex_number(&mut cur, mark)?
        } else if c == '"' {
            lex_string(&mut cur, mark)?
        } else if c == ':' && cur.peek_at(1).is_some_and(|n| is_ident_start(n) || n.is_ascii_alphabetic()) {
            cur.bump();
            TokenKind::Atom(take_word(&mut cur))
        } else if let Some(op) = OPERATORS.iter().find(|op| cur.src[cur.pos..].starts_with(**op)) {
            for _ in 0..op.len() {
                cur.bump();
            }
            TokenKind::Op(op)
        } else {
            cur.bump();
            return Err(LexError {
                message: format!("unexpected character `{c}`"),
                span: cur.span_from(mark),
            });
        };
        let span = cur.span_from(mark);
        tokens.push(Token {
            kind,
            lexeme: source[span.start..span.end].to_string(),
            span,
        });
    }

    let mark = cur.mark();
    tokens.push(Token {
        kind: TokenKind::Eof,
        lexeme: String::new(),
        span: cur.span_from(mark),
    });
    Ok(tokens)
}

/// Identifier characters, plus an optional trailing `?` or `!`.
fn take_word(cur: &mut Cursor<'_>) -> String {
    let start = cur.pos;
    while cur.peek().is_some_and(is_ident_char) {
        cur.bump();
    }
    if matches!(cur.peek(), Some('?') | Some('!')) && cur.peek_at(1) != Some('=') {
        cur.bump();
    }
    cur.src[start..cur.pos].to_string()
}

fn lex_number(cur: &mut Cursor<'_>, mark: (usize, u32, u32)) -> Result<TokenKind, LexError> {
    let start = cur.pos;
    while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        cur.bump();
    }
    let is_float = cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|c| c.is_ascii_digit());
    if is_float {
        cur.bump();
        while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            cur.bump();
        }
    }
    let text = &cur.src[start..cur.pos];
    if is_float {
        text.parse::<f64>().map(TokenKind::Float).map_err(|_| LexError {
            message: format!("invalid float literal `{text}`"),
            span: cur.span_from(mark),
        })
    } else {
        text.parse::<i64>().map(TokenKind::Int).map_err(|_| LexError {
            message: format!("integer literal `{text}` is out of range"),
            span: cur.span_from(mark),
        })
    }
}

fn lex_string(cur: &mut Cursor<'_>, mark: (usize, u32, u32)) -> Result<TokenKind, LexError> {
    cur.bump();
    let mut value = String::new();
    loop {
        match cur.bump() {
            None => {
                return Err(LexError {
                    message: "unterminated string literal".into(),
                    span: cur.span_from(mark),
                })
            }
            Some('"') => return Ok(TokenKind::Str(value)),
            Some('\\') => {
                let esc_mark = cur.mark();
                match cur.bump() {
                    Some('"') => value.push('"'),
                    Some('\\') => value.push('\\'),
                    Some('n') => value.push('\n'),
                    Some('t') => value.push('\t'),
                    Some(other) => {
                        return Err(LexError {
                            message: format!("unsupported escape sequence `\\{other}`"),
                            span: cur.span_from((esc_mark.0 - 1, esc_mark.1, esc_mark.2 - 1)),
                        })
                    }
                    None => {
                        return Err(LexError {
                            message: "unterminated string literal".into(),
                            span: cur.span_from(mark),
                        })
                    }
                }
            }
            Some(c) => value.push(c),
        }
    }
}
