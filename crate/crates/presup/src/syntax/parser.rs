//! Recursive-descent parser for the three formula languages.
//!
//! The grammar (see `docs/grammar.ebnf` at the repository root) is shared;
//! which constructs are admitted depends on the target language: `/` only in
//! the presupposition language, `in(...)` and `true` only in the context
//! language. Context members inside `in({...}, ...)` are parsed as plain
//! first-order formulas.

use crate::formulas::{ConFormula, Context, LFormula, PreFormula, Term};

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Lang {
    L,
    Pre,
    Con,
}

impl Lang {
    fn name(self) -> &'static str {
        match self {
            Lang::L => "the base language",
            Lang::Pre => "the presupposition language",
            Lang::Con => "the context language",
        }
    }
}

#[derive(Debug)]
enum Ast {
    Atom(String, Vec<Term>),
    Not(Box<Ast>),
    And(Box<Ast>, Box<Ast>),
    Or(Box<Ast>, Box<Ast>),
    Implies(Box<Ast>, Box<Ast>),
    Forall(String, Box<Ast>),
    Exists(String, Box<Ast>),
    Presup(Box<Ast>, Box<Ast>),
    In(Vec<Ast>, Box<Ast>),
    Top,
}

impl Ast {
    fn contains_presup(&self) -> bool {
        match self {
            Ast::Atom(_, _) | Ast::Top => false,
            Ast::Not(f) | Ast::Forall(_, f) | Ast::Exists(_, f) => f.contains_presup(),
            Ast::And(a, b) | Ast::Or(a, b) | Ast::Implies(a, b) => {
                a.contains_presup() || b.contains_presup()
            }
            Ast::Presup(_, _) => true,
            Ast::In(members, f) => {
                members.iter().any(Ast::contains_presup) || f.contains_presup()
            }
        }
    }

    fn into_l(self) -> LFormula {
        match self {
            Ast::Atom(p, args) => LFormula::Atom(p, args),
            Ast::Not(f) => LFormula::not(f.into_l()),
            Ast::And(a, b) => LFormula::and(a.into_l(), b.into_l()),
            Ast::Or(a, b) => LFormula::or(a.into_l(), b.into_l()),
            Ast::Implies(a, b) => LFormula::implies(a.into_l(), b.into_l()),
            Ast::Forall(x, f) => LFormula::Forall(x, Box::new(f.into_l())),
            Ast::Exists(x, f) => LFormula::Exists(x, Box::new(f.into_l())),
            Ast::Presup(_, _) | Ast::In(_, _) | Ast::Top => {
                unreachable!("rejected while parsing the base language")
            }
        }
    }

    fn into_pre(self) -> PreFormula {
        match self {
            Ast::Atom(p, args) => PreFormula::Atom(p, args),
            Ast::Not(f) => PreFormula::not(f.into_pre()),
            Ast::And(a, b) => PreFormula::and(a.into_pre(), b.into_pre()),
            Ast::Or(a, b) => PreFormula::or(a.into_pre(), b.into_pre()),
            Ast::Implies(a, b) => PreFormula::implies(a.into_pre(), b.into_pre()),
            Ast::Forall(x, f) => PreFormula::Forall(x, Box::new(f.into_pre())),
            Ast::Exists(x, f) => PreFormula::Exists(x, Box::new(f.into_pre())),
            Ast::Presup(pi, f) => PreFormula::Presup(pi.into_l(), Box::new(f.into_pre())),
            Ast::In(_, _) | Ast::Top => {
                unreachable!("rejected while parsing the presupposition language")
            }
        }
    }

    fn into_con(self) -> ConFormula {
        match self {
            Ast::Atom(p, args) => ConFormula::Atom(p, args),
            Ast::Not(f) => ConFormula::not(f.into_con()),
            Ast::And(a, b) => ConFormula::and(a.into_con(), b.into_con()),
            Ast::Or(a, b) => ConFormula::or(a.into_con(), b.into_con()),
            Ast::Implies(a, b) => ConFormula::implies(a.into_con(), b.into_con()),
            Ast::Forall(x, f) => ConFormula::Forall(x, Box::new(f.into_con())),
            Ast::Exists(x, f) => ConFormula::Exists(x, Box::new(f.into_con())),
            Ast::In(members, f) => {
                let ctx: Context = members.into_iter().map(Ast::into_l).collect();
                ConFormula::In(ctx, Box::new(f.into_con()))
            }
            Ast::Top => ConFormula::Top,
            Ast::Presup(_, _) => unreachable!("rejected while parsing the context language"),
        }
    }
}

struct Parsed {
    ast: Ast,
    span: SourceSpan,
    /// Whether the subformula was written as a bare atom or wrapped in
    /// parentheses — the only shapes admitted to the left of `/`.
    atomic_or_paren: bool,
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    lang: Lang,
    bound: Vec<String>,
    input_len: usize,
    _input: &'a str,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, lang: Lang) -> Result<Parser<'a>, ParseError> {
        Ok(Parser {
            tokens: tokenize(input)?,
            pos: 0,
            lang,
            bound: Vec::new(),
            input_len: input.len(),
            _input: input,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_span(&self) -> SourceSpan {
        SourceSpan { start: self.input_len, end: self.input_len }
    }

    fn error_here(&self, message: String, expected: Vec<String>) -> ParseError {
        let span = self.peek().map(|t| t.span).unwrap_or_else(|| self.eof_span());
        ParseError { span, message, expected }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        match self.peek() {
            Some(t) if t.tok == tok => Ok(self.advance().unwrap()),
            Some(t) => Err(ParseError {
                span: t.span,
                message: format!("expected {}, found {}", tok.describe(), t.tok.describe()),
                expected: vec![tok.describe()],
            }),
            None => Err(ParseError {
                span: self.eof_span(),
                message: format!("unexpected end of input, expected {}", tok.describe()),
                expected: vec![tok.describe()],
            }),
        }
    }

    fn formula(&mut self) -> Result<Parsed, ParseError> {
        self.implies()
    }

    fn implies(&mut self) -> Result<Parsed, ParseError> {
        let lhs = self.or()?;
        if matches!(self.peek(), Some(t) if t.tok == Tok::Arrow) {
            self.advance();
            let rhs = self.implies()?;
            let span = SourceSpan { start: lhs.span.start, end: rhs.span.end };
            Ok(Parsed {
                ast: Ast::Implies(Box::new(lhs.ast), Box::new(rhs.ast)),
                span,
                atomic_or_paren: false,
            })
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Parsed, ParseError> {
        let mut lhs = self.and()?;
        while matches!(self.peek(), Some(t) if t.tok == Tok::Pipe) {
            self.advance();
            let rhs = self.and()?;
            let span = SourceSpan { start: lhs.span.start, end: rhs.span.end };
            lhs = Parsed {
                ast: Ast::Or(Box::new(lhs.ast), Box::new(rhs.ast)),
                span,
                atomic_or_paren: false,
            };
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Parsed, ParseError> {
        let mut lhs = self.slash()?;
        while matches!(self.peek(), Some(t) if t.tok == Tok::Amp) {
            self.advance();
            let rhs = self.slash()?;
            let span = SourceSpan { start: lhs.span.start, end: rhs.span.end };
            lhs = Parsed {
                ast: Ast::And(Box::new(lhs.ast), Box::new(rhs.ast)),
                span,
                atomic_or_paren: false,
            };
        }
        Ok(lhs)
    }

    fn slash(&mut self) -> Result<Parsed, ParseError> {
        let lhs = self.neg()?;
        if matches!(self.peek(), Some(t) if t.tok == Tok::Slash) {
            let slash_span = self.peek().unwrap().span;
            if self.lang != Lang::Pre {
                return Err(ParseError {
                    span: slash_span,
                    message: format!(
                        "the presupposition connective `/` is not part of {}",
                        self.lang.name()
                    ),
                    expected: Vec::new(),
                });
            }
            if !lhs.atomic_or_paren {
                return Err(ParseError {
                    span: lhs.span,
                    message: "the left argument of `/` must be an atom or parenthesized"
                        .to_string(),
                    expected: Vec::new(),
                });
            }
            if lhs.ast.contains_presup() {
                return Err(ParseError {
                    span: lhs.span,
                    message: "the left argument of `/` must be a first-order formula"
                        .to_string(),
                    expected: Vec::new(),
                });
            }
            self.advance();
            let rhs = self.slash()?;
            let span = SourceSpan { start: lhs.span.start, end: rhs.span.end };
            Ok(Parsed {
                ast: Ast::Presup(Box::new(lhs.ast), Box::new(rhs.ast)),
                span,
                atomic_or_paren: false,
            })
        } else {
            Ok(lhs)
        }
    }

    fn neg(&mut self) -> Result<Parsed, ParseError> {
        if matches!(self.peek(), Some(t) if t.tok == Tok::Tilde) {
            let start = self.peek().unwrap().span.start;
            self.advance();
            let inner = self.neg()?;
            let span = SourceSpan { start, end: inner.span.end };
            Ok(Parsed { ast: Ast::Not(Box::new(inner.ast)), span, atomic_or_paren: false })
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Parsed, ParseError> {
        let Some(token) = self.peek().cloned() else {
            return Err(ParseError {
                span: self.eof_span(),
                message: "unexpected end of input, expected a formula".to_string(),
                expected: vec!["formula".to_string()],
            });
        };
        match token.tok {
            Tok::KwForall | Tok::KwExists => self.quantifier(),
            Tok::KwTrue => {
                if self.lang != Lang::Con {
                    return Err(ParseError {
                        span: token.span,
                        message: format!("`true` is not part of {}", self.lang.name()),
                        expected: Vec::new(),
                    });
                }
                self.advance();
                Ok(Parsed { ast: Ast::Top, span: token.span, atomic_or_paren: true })
            }
            Tok::KwIn => {
                if self.lang != Lang::Con {
                    return Err(ParseError {
                        span: token.span,
                        message: format!("`in` is not part of {}", self.lang.name()),
                        expected: Vec::new(),
                    });
                }
                self.in_statement(token.span)
            }
            Tok::Ident(name) => {
                self.advance();
                let mut end = token.span.end;
                let mut args = Vec::new();
                if matches!(self.peek(), Some(t) if t.tok == Tok::LParen) {
                    self.advance();
                    args = self.term_list()?;
                    let close = self.expect(Tok::RParen)?;
                    end = close.span.end;
                }
                Ok(Parsed {
                    ast: Ast::Atom(name, args),
                    span: SourceSpan { start: token.span.start, end },
                    atomic_or_paren: true,
                })
            }
            Tok::LParen => {
                self.advance();
                let inner = self.formula()?;
                let close = self.expect(Tok::RParen)?;
                Ok(Parsed {
                    ast: inner.ast,
                    span: SourceSpan { start: token.span.start, end: close.span.end },
                    atomic_or_paren: true,
                })
            }
            other => Err(ParseError {
                span: token.span,
                message: format!("expected a formula, found {}", other.describe()),
                expected: vec!["formula".to_string()],
            }),
        }
    }

    fn quantifier(&mut self) -> Result<Parsed, ParseError> {
        let kw = self.advance().unwrap();
        let var = match self.advance() {
            Some(Token { tok: Tok::Ident(name), .. }) => name,
            Some(t) => {
                return Err(ParseError {
                    span: t.span,
                    message: format!("expected a variable name, found {}", t.tok.describe()),
                    expected: vec!["variable name".to_string()],
                });
            }
            None => {
                return Err(ParseError {
                    span: self.eof_span(),
                    message: "unexpected end of input, expected a variable name".to_string(),
                    expected: vec!["variable name".to_string()],
                });
            }
        };
        self.expect(Tok::Dot)?;
        self.bound.push(var.clone());
        let body = self.formula();
        self.bound.pop();
        let body = body?;
        let span = SourceSpan { start: kw.span.start, end: body.span.end };
        let ast = if kw.tok == Tok::KwForall {
            Ast::Forall(var, Box::new(body.ast))
        } else {
            Ast::Exists(var, Box::new(body.ast))
        };
        Ok(Parsed { ast, span, atomic_or_paren: false })
    }

    fn in_statement(&mut self, kw_span: SourceSpan) -> Result<Parsed, ParseError> {
        self.advance();
        self.expect(Tok::LParen)?;
        self.expect(Tok::LBrace)?;
        let mut members = Vec::new();
        if !matches!(self.peek(), Some(t) if t.tok == Tok::RBrace) {
            loop {
                let outer = self.lang;
                self.lang = Lang::L;
                let member = self.formula();
                self.lang = outer;
                members.push(member?.ast);
                if matches!(self.peek(), Some(t) if t.tok == Tok::Comma) {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::Comma)?;
        let body = self.formula()?;
        let close = self.expect(Tok::RParen)?;
        Ok(Parsed {
            ast: Ast::In(members, Box::new(body.ast)),
            span: SourceSpan { start: kw_span.start, end: close.span.end },
            atomic_or_paren: true,
        })
    }

    fn term_list(&mut self) -> Result<Vec<Term>, ParseError> {
        if matches!(self.peek(), Some(t) if t.tok == Tok::RParen) {
            return Err(self.error_here(
                "argument lists must not be empty (write a bare name instead)".to_string(),
                vec!["term".to_string()],
            ));
        }
        let mut terms = vec![self.term()?];
        while matches!(self.peek(), Some(t) if t.tok == Tok::Comma) {
            self.advance();
            terms.push(self.term()?);
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.advance() {
            Some(Token { tok: Tok::Ident(name), .. }) => {
                if matches!(self.peek(), Some(t) if t.tok == Tok::LParen) {
                    self.advance();
                    let args = self.term_list()?;
                    self.expect(Tok::RParen)?;
                    Ok(Term::App(name, args))
                } else if self.bound.iter().any(|b| *b == name)
                    || name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
                {
                    Ok(Term::Var(name))
                } else {
                    Ok(Term::Const(name))
                }
            }
            Some(t) => Err(ParseError {
                span: t.span,
                message: format!("expected a term, found {}", t.tok.describe()),
                expected: vec!["term".to_string()],
            }),
            None => Err(ParseError {
                span: self.eof_span(),
                message: "unexpected end of input, expected a term".to_string(),
                expected: vec!["term".to_string()],
            }),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError {
                span: t.span,
                message: format!("unexpected {} after the end of the formula", t.tok.describe()),
                expected: Vec::new(),
            }),
        }
    }
}

fn parse_with_lang(input: &str, lang: Lang) -> Result<Ast, ParseError> {
    let mut parser = Parser::new(input, lang)?;
    let parsed = parser.formula()?;
    parser.finish()?;
    Ok(parsed.ast)
}

/// Parses a formula of the base first-order language.
pub fn parse_l(input: &str) -> Result<LFormula, ParseError> {
    parse_with_lang(input, Lang::L).map(Ast::into_l)
}

/// Parses a formula of the presupposition language (ASCII `/` connective).
pub fn parse_pre(input: &str) -> Result<PreFormula, ParseError> {
    parse_with_lang(input, Lang::Pre).map(Ast::into_pre)
}

/// Parses a formula of the context language (`in({...}, ...)` and `true`).
pub fn parse_con(input: &str) -> Result<ConFormula, ParseError> {
    parse_with_lang(input, Lang::Con).map(Ast::into_con)
}

/// Parses a bare term (used by the proof-trace reader).
pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    let mut parser = Parser::new(input, Lang::L)?;
    let term = parser.term()?;
    parser.finish()?;
    Ok(term)
}
