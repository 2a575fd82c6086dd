//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence, tightest first: prefix operators (`~ ! K B [] box <> dia`),
//! `&`, `|`, `->`, `<->`. Conjunction and disjunction associate to the left,
//! both arrows to the right.

use std::fmt;

use thiserror::Error;

use super::scheme::Pattern;
use super::{Formula, Modality, Tree};

const MAX_NESTING: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnbalancedParen,
    UnexpectedToken(String),
    UnexpectedEnd,
    MetavariableNotAllowed(String),
    TooDeep,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnbalancedParen => f.write_str("unbalanced parenthesis"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected token `{t}`"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::MetavariableNotAllowed(m) => {
                write!(f, "metavariable `?{m}` outside a scheme")
            }
            ParseErrorKind::TooDeep => write!(f, "nesting deeper than {MAX_NESTING}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Meta(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    Modal(Modality),
    Dia,
    True,
    False,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => f.write_str(s),
            Tok::Meta(s) => write!(f, "?{s}"),
            Tok::Not => f.write_str("~"),
            Tok::And => f.write_str("&"),
            Tok::Or => f.write_str("|"),
            Tok::Implies => f.write_str("->"),
            Tok::Iff => f.write_str("<->"),
            Tok::Modal(Modality::Know) => f.write_str("K"),
            Tok::Modal(Modality::Box) => f.write_str("[]"),
            Tok::Modal(Modality::Bel) => f.write_str("B"),
            Tok::Dia => f.write_str("<>"),
            Tok::True => f.write_str("true"),
            Tok::False => f.write_str("false"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
        }
    }
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_lowercase()
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_'
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |kind, offset| Err(ParseError { kind, offset });
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let rest = &bytes[i..];
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' | b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'K' => Tok::Modal(Modality::Know),
            b'B' => Tok::Modal(Modality::Bel),
            b'-' if rest.starts_with(b"->") => {
                i += 1;
                Tok::Implies
            }
            b'<' if rest.starts_with(b"<->") => {
                i += 2;
                Tok::Iff
            }
            b'<' if rest.starts_with(b"<>") => {
                i += 1;
                Tok::Dia
            }
            b'[' if rest.starts_with(b"[]") => {
                i += 1;
                Tok::Modal(Modality::Box)
            }
            b'?' => {
                let mut j = i + 1;
                if j >= bytes.len() || !is_ident_start(bytes[j]) {
                    return err(ParseErrorKind::UnexpectedChar('?'), start);
                }
                while j < bytes.len() && is_ident_continue(bytes[j]) {
                    j += 1;
                }
                let name = text[i + 1..j].to_string();
                i = j;
                out.push((Tok::Meta(name), start));
                continue;
            }
            _ if is_ident_start(b) => {
                let mut j = i;
                while j < bytes.len() && is_ident_continue(bytes[j]) {
                    j += 1;
                }
                let word = &text[i..j];
                i = j;
                let tok = match word {
                    "box" => Tok::Modal(Modality::Box),
                    "dia" => Tok::Dia,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((tok, start));
                continue;
            }
            _ => {
                let c = text[i..].chars().next().unwrap_or('\u{fffd}');
                return err(ParseErrorKind::UnexpectedChar(c), start);
            }
        };
        i += 1;
        out.push((tok, start));
    }
    Ok(out)
}

/// A tree that may additionally carry metavariable leaves.
trait Leaves: Tree {
    fn meta(name: &str) -> Option<Self>;
}

impl Leaves for Formula {
    fn meta(_: &str) -> Option<Self> {
        None
    }
}

impl Leaves for Pattern {
    fn meta(name: &str) -> Option<Self> {
        Some(Pattern::Meta(name.to_string()))
    }
}

struct Parser<'t> {
    toks: &'t [(Tok, usize)],
    pos: usize,
    end: usize,
    depth: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn error<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { kind, offset: self.offset() })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.error(ParseErrorKind::TooDeep);
        }
        Ok(())
    }

    fn iff<T: Leaves>(&mut self) -> Result<T, ParseError> {
        self.enter()?;
        let lhs = self.implies::<T>()?;
        let out = if self.eat(&Tok::Iff) { lhs.iff(self.iff()?) } else { lhs };
        self.depth -= 1;
        Ok(out)
    }

    fn implies<T: Leaves>(&mut self) -> Result<T, ParseError> {
        self.enter()?;
        let lhs = self.or::<T>()?;
        let out = if self.eat(&Tok::Implies) { lhs.implies(self.implies()?) } else { lhs };
        self.depth -= 1;
        Ok(out)
    }

    fn or<T: Leaves>(&mut self) -> Result<T, ParseError> {
        let mut acc = self.and::<T>()?;
        while self.eat(&Tok::Or) {
            acc = acc.or(self.and()?);
        }
        Ok(acc)
    }

    fn and<T: Leaves>(&mut self) -> Result<T, ParseError> {
        let mut acc = self.unary::<T>()?;
        while self.eat(&Tok::And) {
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn unary<T: Leaves>(&mut self) -> Result<T, ParseError> {
        self.enter()?;
        let out = match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                self.unary::<T>()?.not()
            }
            Some(Tok::Modal(m)) => {
                self.pos += 1;
                T::modal(*m, self.unary()?)
            }
            Some(Tok::Dia) => {
                self.pos += 1;
                self.unary::<T>()?.dia()
            }
            _ => self.atom()?,
        };
        self.depth -= 1;
        Ok(out)
    }

    fn atom<T: Leaves>(&mut self) -> Result<T, ParseError> {
        let start = self.offset();
        match self.peek() {
            None => self.error(ParseErrorKind::UnexpectedEnd),
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(T::prop(name))
            }
            Some(Tok::Meta(name)) => match T::meta(name) {
                Some(t) => {
                    self.pos += 1;
                    Ok(t)
                }
                None => self.error(ParseErrorKind::MetavariableNotAllowed(name.clone())),
            },
            Some(Tok::True) => {
                self.pos += 1;
                Ok(T::top())
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(T::bottom())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return match self.peek() {
                        None => Err(ParseError { kind: ParseErrorKind::UnbalancedParen, offset: start }),
                        Some(t) => self.error(ParseErrorKind::UnexpectedToken(t.to_string())),
                    };
                }
                Ok(inner)
            }
            Some(Tok::RParen) => self.error(ParseErrorKind::UnbalancedParen),
            Some(t) => self.error(ParseErrorKind::UnexpectedToken(t.to_string())),
        }
    }
}

fn parse_tree<T: Leaves>(text: &str) -> Result<T, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, end: text.len(), depth: 0 };
    let tree = p.iff::<T>()?;
    match p.peek() {
        None => Ok(tree),
        Some(Tok::RParen) => p.error(ParseErrorKind::UnbalancedParen),
        Some(t) => p.error(ParseErrorKind::UnexpectedToken(t.to_string())),
    }
}

/// Parses a formula and expands all sugar into the six primitives.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_tree(text)
}

/// Parses a scheme body, where `?name` stands for a metavariable.
pub fn parse_scheme(text: &str) -> Result<Pattern, ParseError> {
    parse_tree(text)
}
