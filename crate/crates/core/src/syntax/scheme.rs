//! Axiom-scheme templates and first-order matching against formulas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::parse::{parse_scheme, ParseError};
use super::{Formula, Modality, Tree};

/// A formula whose leaves may also be metavariables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Meta(String),
    Prop(String),
    Not(Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Modal(Modality, Box<Pattern>),
}

impl Tree for Pattern {
    fn prop(name: &str) -> Self {
        Pattern::Prop(name.to_string())
    }
    fn not(self) -> Self {
        Pattern::Not(Box::new(self))
    }
    fn and(self, other: Self) -> Self {
        Pattern::And(Box::new(self), Box::new(other))
    }
    fn modal(m: Modality, inner: Self) -> Self {
        Pattern::Modal(m, Box::new(inner))
    }
}

impl Pattern {
    pub fn metavariables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_metas(&mut out);
        out
    }

    fn collect_metas(&self, out: &mut BTreeSet<String>) {
        match self {
            Pattern::Meta(m) => {
                out.insert(m.clone());
            }
            Pattern::Prop(_) => {}
            Pattern::Not(p) | Pattern::Modal(_, p) => p.collect_metas(out),
            Pattern::And(a, b) => {
                a.collect_metas(out);
                b.collect_metas(out);
            }
        }
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Pattern::Meta(m) => {
                out.push('?');
                out.push_str(m);
            }
            Pattern::Prop(p) => out.push_str(p),
            Pattern::Not(p) => {
                out.push('~');
                p.render_into(out);
            }
            Pattern::And(a, b) => {
                out.push('(');
                a.render_into(out);
                out.push_str(" & ");
                b.render_into(out);
                out.push(')');
            }
            Pattern::Modal(Modality::Box, p) => {
                out.push_str("[]");
                p.render_into(out);
            }
            Pattern::Modal(m, p) => {
                out.push_str(m.token());
                out.push(' ');
                p.render_into(out);
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render_into(&mut s);
        f.write_str(&s)
    }
}

/// Binding of metavariable names to formulas.
pub type Substitution = BTreeMap<String, Formula>;

/// A named axiom scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeTemplate {
    name: String,
    pattern: Pattern,
    metavars: BTreeSet<String>,
}

impl SchemeTemplate {
    pub fn new(name: impl Into<String>, pattern: Pattern) -> Self {
        let metavars = pattern.metavariables();
        SchemeTemplate { name: name.into(), pattern, metavars }
    }

    /// Builds a scheme from text such as `"K ?phi -> ?phi"`.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self, ParseError> {
        Ok(SchemeTemplate::new(name, parse_scheme(text)?))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    /// Declared metavariables, in name order.
    pub fn metavars(&self) -> &BTreeSet<String> {
        &self.metavars
    }

    /// Finds the substitution making this scheme equal to `f`, if any.
    /// A metavariable binds on its first occurrence; later occurrences must
    /// be the identical formula.
    pub fn match_formula(&self, f: &Formula) -> Option<Substitution> {
        let mut sigma = Substitution::new();
        match_into(&self.pattern, f, &mut sigma).then_some(sigma)
    }

    /// `None` if `sigma` leaves a declared metavariable unbound.
    pub fn instantiate(&self, sigma: &Substitution) -> Option<Formula> {
        instantiate(&self.pattern, sigma)
    }
}

fn match_into(pat: &Pattern, f: &Formula, sigma: &mut Substitution) -> bool {
    match (pat, f) {
        (Pattern::Meta(m), _) => match sigma.get(m) {
            Some(bound) => bound == f,
            None => {
                sigma.insert(m.clone(), f.clone());
                true
            }
        },
        (Pattern::Prop(a), Formula::Prop(b)) => a == b,
        (Pattern::Not(p), Formula::Not(g)) => match_into(p, g, sigma),
        (Pattern::And(pa, pb), Formula::And(ga, gb)) => {
            match_into(pa, ga, sigma) && match_into(pb, gb, sigma)
        }
        (Pattern::Modal(m, p), _) => match f.head_modality() {
            Some((head, g)) if head == *m => match_into(p, g, sigma),
            _ => false,
        },
        _ => false,
    }
}

fn instantiate(pat: &Pattern, sigma: &Substitution) -> Option<Formula> {
    Some(match pat {
        Pattern::Meta(m) => sigma.get(m)?.clone(),
        Pattern::Prop(p) => Formula::Prop(p.clone()),
        Pattern::Not(p) => instantiate(p, sigma)?.not(),
        Pattern::And(a, b) => instantiate(a, sigma)?.and(instantiate(b, sigma)?),
        Pattern::Modal(m, p) => Formula::modal(*m, instantiate(p, sigma)?),
    })
}
