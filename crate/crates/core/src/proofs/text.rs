//! The line-oriented proof file format:
//!
//! ```text
//! # comment
//! 1. B p -> K B p ; axiom sPI
//! 2. K B p -> B B p ; axiom KB
//! 3. B p -> B B p ; cpl 1,2
//! ```
//!
//! Justifications are `axiom <name>`, `mp <i> <j>`, `nec K|box|B <i>`,
//! `cpl [<i>[,<j>...]]` and `premise`. Blank lines and `#` comments are
//! skipped; line numbers must run 1, 2, 3, ...

use std::fmt::Write;

use thiserror::Error;

use super::check::{Justification, Proof, ProofLine};
use crate::syntax::{parse, Modality, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofParseErrorKind {
    #[error("expected `<n>. <formula> ; <justification>`")]
    Layout,
    #[error("expected line number {expected}")]
    Numbering { expected: usize },
    #[error("bad formula: {0}")]
    Formula(#[from] ParseError),
    #[error("bad justification {0:?}")]
    Justification(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("proof text line {text_line}: {kind}")]
pub struct ProofParseError {
    /// 1-based line of the input text.
    pub text_line: usize,
    pub kind: ProofParseErrorKind,
}

fn parse_justification(s: &str) -> Option<Justification> {
    let mut words = s.split_whitespace();
    let head = words.next()?;
    let rest: Vec<&str> = words.collect();
    let index = |w: &str| w.parse::<usize>().ok();
    match (head, rest.as_slice()) {
        ("axiom", [name]) => Some(Justification::Axiom(name.to_string())),
        ("mp", [i, j]) => Some(Justification::Mp(index(i)?, index(j)?)),
        ("nec", [m, i]) => Some(Justification::Nec(Modality::from_token(m)?, index(i)?)),
        ("premise", []) => Some(Justification::Premise),
        ("cpl", _) => {
            let joined = rest.concat();
            if joined.is_empty() {
                return Some(Justification::Cpl(vec![]));
            }
            joined.split(',').map(index).collect::<Option<Vec<_>>>().map(Justification::Cpl)
        }
        _ => None,
    }
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofParseError> {
    let mut lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let fail = |kind| ProofParseError { text_line: k + 1, kind };
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (number, rest) = body.split_once('.').ok_or_else(|| fail(ProofParseErrorKind::Layout))?;
        let expected = lines.len() + 1;
        if number.trim().parse::<usize>().ok() != Some(expected) {
            return Err(fail(ProofParseErrorKind::Numbering { expected }));
        }
        let (formula, just) = rest.rsplit_once(';').ok_or_else(|| fail(ProofParseErrorKind::Layout))?;
        let formula = parse(formula.trim()).map_err(|e| fail(e.into()))?;
        let justification = parse_justification(just.trim())
            .ok_or_else(|| fail(ProofParseErrorKind::Justification(just.trim().to_string())))?;
        lines.push(ProofLine { formula, justification });
    }
    Ok(Proof { lines })
}

pub fn render_justification(j: &Justification) -> String {
    match j {
        Justification::Axiom(n) => format!("axiom {n}"),
        Justification::Mp(i, j) => format!("mp {i} {j}"),
        Justification::Nec(m, i) => format!("nec {} {i}", m.token()),
        Justification::Cpl(ids) if ids.is_empty() => "cpl".to_string(),
        Justification::Cpl(ids) => {
            let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
            format!("cpl {}", ids.join(","))
        }
        Justification::Premise => "premise".to_string(),
    }
}

/// Renders in the file format with sugared formulas; `parse_proof` inverts it.
pub fn render_proof(proof: &Proof) -> String {
    let mut out = String::new();
    for (k, line) in proof.lines.iter().enumerate() {
        writeln!(out, "{}. {} ; {}", k + 1, line.formula.render_sugared(), render_justification(&line.justification)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let text = "# positive introspection\n1. B p -> K B p ; axiom sPI\n\n2. K B p -> B B p ; axiom KB\n3. B p -> B B p ; cpl 1, 2\n";
        let proof = parse_proof(text).unwrap();
        assert_eq!(proof.lines[2].justification, Justification::Cpl(vec![1, 2]));
        let rendered = render_proof(&proof);
        assert_eq!(rendered.lines().nth(2), Some("3. (B p -> B B p) ; cpl 1,2"));
        assert_eq!(parse_proof(&rendered).unwrap(), proof);
    }

    #[test]
    fn justifications() {
        assert_eq!(parse_justification("nec box 3"), Some(Justification::Nec(Modality::Box, 3)));
        assert_eq!(parse_justification("cpl"), Some(Justification::Cpl(vec![])));
        assert_eq!(parse_justification("mp 1"), None);
        assert_eq!(parse_justification("nec X 1"), None);
        assert_eq!(parse_justification("premise 2"), None);
    }

    #[test]
    fn errors() {
        let err = parse_proof("2. p ; premise").unwrap_err();
        assert_eq!(err.kind, ProofParseErrorKind::Numbering { expected: 1 });
        let err = parse_proof("1. p premise").unwrap_err();
        assert_eq!(err.kind, ProofParseErrorKind::Layout);
        let err = parse_proof("\n1. p & ; premise").unwrap_err();
        assert_eq!(err.text_line, 2);
        assert!(matches!(err.kind, ProofParseErrorKind::Formula(_)));
    }
}
