//! Source locations.

use std::fmt;

/// A range of source text.
///
/// `start`/`end` are byte offsets (half-open). Lines and columns are
/// 1-based; `end_col` is the column one past the last character, so a
/// five-character token at the start of a file spans `1:1..1:6`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub fn new(start: usize, end: usize, line: u32, col: u32, end_line: u32, end_col: u32) -> Self {
        Span {
            start,
            end,
            line,
            col,
            end_line,
            end_col,
        }
    }

    /// The smallest span covering both `self` and `other`.
    pub fn to(self, other: Span) -> Span {
        let (first, _) = if self.start <= other.start {
            (self, other)
        } else {
            (other, self)
        };
        let last = if self.end >= other.end { self } else { other };
        Span {
            start: first.start,
            line: first.line,
            col: first.col,
            end: last.end,
            end_line: last.end_line,
            end_col: last.end_col,
        }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// The source text this span covers, if it indexes `source`.
    pub fn slice<'a>(&self, source: &'a str) -> Option<&'a str> {
        source.get(self.start..self.end)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}..{}:{}",
            self.line, self.col, self.end_line, self.end_col
        )
    }
}

/// Anything that records where it came from.
pub trait Spanned {
    fn span(&self) -> Span;
}

/// Returns the span recorded for `node`.
pub fn span_of<N: Spanned + ?Sized>(node: &N) -> Span {
    node.span()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn to_covers_both() {
        let a = Span::new(0, 3, 1, 1, 1, 4);
        let b = Span::new(5, 9, 2, 1, 2, 5);
        let c = a.to(b);
        assert_eq!((c.start, c.end, c.line, c.end_line), (0, 9, 1, 2));
        assert_eq!(b.to(a), c);
        assert!(c.contains(&a) && c.contains(&b));
    }
}
