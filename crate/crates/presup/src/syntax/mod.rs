//! Concrete text syntax: parsing and rendering for all three languages.
//!
//! The grammar is published in `docs/grammar.ebnf`. Highlights:
//!
//! * precedence, tightest first: `~`, `/`, `&`, `|`, `->`;
//! * `&` and `|` associate left, `->` associates right;
//! * the left argument of `/` must be an atom or parenthesized;
//! * `forall x.` / `exists x.` scope extends maximally to the right;
//! * identifiers bound by an enclosing quantifier are variables, other
//!   lowercase identifiers in term position are constants, and
//!   uppercase-initial identifiers in term position are free variables.

use std::fmt;

mod lexer;
mod parser;
mod printer;

pub use parser::{parse_con, parse_l, parse_pre, parse_term};
pub(crate) use printer::term_compact;

/// A byte range into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

/// A syntax error, locating the offending input bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    /// Descriptions of the token kinds that would have been accepted, when
    /// the parser knows them.
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, message: String) -> ParseError {
        ParseError { span, message, expected: Vec::new() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}..{}: {}", self.span.start, self.span.end, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Renders a formula to its canonical text form.
///
/// Equivalent to `formula.to_string()`; provided as a named entry point so
/// callers can spell out the intent. The output round-trips: parsing it in
/// the formula's language reconstructs the same AST.
pub fn render<T: fmt::Display>(formula: &T) -> String {
    formula.to_string()
}
