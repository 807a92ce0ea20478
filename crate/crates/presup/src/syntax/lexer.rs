//! Tokenizer for the ASCII formula syntax.

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    KwForall,
    KwExists,
    KwIn,
    KwTrue,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Tilde,
    Slash,
    Amp,
    Pipe,
    Arrow,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::KwForall => "`forall`".to_string(),
            Tok::KwExists => "`exists`".to_string(),
            Tok::KwIn => "`in`".to_string(),
            Tok::KwTrue => "`true`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::LBrace => "`{`".to_string(),
            Tok::RBrace => "`}`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Dot => "`.`".to_string(),
            Tok::Tilde => "`~`".to_string(),
            Tok::Slash => "`/`".to_string(),
            Tok::Amp => "`&`".to_string(),
            Tok::Pipe => "`|`".to_string(),
            Tok::Arrow => "`->`".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = |tok: Tok| Token {
            tok,
            span: SourceSpan { start, end: start + c.len_utf8() },
        };
        match c {
            '(' => {
                tokens.push(single(Tok::LParen));
                chars.next();
            }
            ')' => {
                tokens.push(single(Tok::RParen));
                chars.next();
            }
            '{' => {
                tokens.push(single(Tok::LBrace));
                chars.next();
            }
            '}' => {
                tokens.push(single(Tok::RBrace));
                chars.next();
            }
            ',' => {
                tokens.push(single(Tok::Comma));
                chars.next();
            }
            '.' => {
                tokens.push(single(Tok::Dot));
                chars.next();
            }
            '~' => {
                tokens.push(single(Tok::Tilde));
                chars.next();
            }
            '/' => {
                tokens.push(single(Tok::Slash));
                chars.next();
            }
            '&' => {
                tokens.push(single(Tok::Amp));
                chars.next();
            }
            '|' => {
                tokens.push(single(Tok::Pipe));
                chars.next();
            }
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        tokens.push(Token {
                            tok: Tok::Arrow,
                            span: SourceSpan { start, end: start + 2 },
                        });
                    }
                    _ => {
                        return Err(ParseError::new(
                            SourceSpan { start, end: start + 1 },
                            "expected `->`".to_string(),
                        ));
                    }
                }
            }
            c if is_ident_start(c) => {
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if is_ident_continue(c) {
                        end = i + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let name = &input[start..end];
                let tok = match name {
                    "forall" => Tok::KwForall,
                    "exists" => Tok::KwExists,
                    "in" => Tok::KwIn,
                    "true" => Tok::KwTrue,
                    _ => Tok::Ident(name.to_string()),
                };
                tokens.push(Token { tok, span: SourceSpan { start, end } });
            }
            other => {
                return Err(ParseError::new(
                    SourceSpan { start, end: start + other.len_utf8() },
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_connectives_and_keywords() {
        let toks = tokenize("forall x. ~p -> in({q}, true)").unwrap();
        let kinds: Vec<Tok> = toks.into_iter().map(|t| t.tok).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::KwForall,
                Tok::Ident("x".to_string()),
                Tok::Dot,
                Tok::Tilde,
                Tok::Ident("p".to_string()),
                Tok::Arrow,
                Tok::KwIn,
                Tok::LParen,
                Tok::LBrace,
                Tok::Ident("q".to_string()),
                Tok::RBrace,
                Tok::Comma,
                Tok::KwTrue,
                Tok::RParen,
            ]
        );
    }

    #[test]
    fn spans_are_byte_offsets() {
        let toks = tokenize("ab & cd").unwrap();
        assert_eq!(toks[0].span, SourceSpan { start: 0, end: 2 });
        assert_eq!(toks[1].span, SourceSpan { start: 3, end: 4 });
        assert_eq!(toks[2].span, SourceSpan { start: 5, end: 7 });
    }

    #[test]
    fn rejects_bare_minus() {
        let err = tokenize("p - q").unwrap_err();
        assert_eq!(err.span, SourceSpan { start: 2, end: 3 });
    }

    #[test]
    fn rejects_unknown_character() {
        assert!(tokenize("p ? q").is_err());
    }
}
