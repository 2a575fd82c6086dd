//! Formulas of the trimodal language with knowledge `K`, knowability `[]`
//! and belief `B`.
//!
//! Only six constructors exist. Every derived connective (`|`, `->`, `<->`,
//! `true`, `false`, `<>`, the duals of `K` and `B`) is expanded the moment it
//! is built, so evaluators, matchers and the proof checker only ever see
//! primitives.

mod parse;
mod scheme;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{parse, parse_scheme, ParseError, ParseErrorKind};
pub use scheme::{SchemeTemplate, Substitution, Pattern};

/// Proposition name reserved for the expansion of `false`.
pub const BOTTOM_PROP: &str = "p0";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prop(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Know(Box<Formula>),
    Box(Box<Formula>),
    Bel(Box<Formula>),
}

/// The three unary modalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    Know,
    Box,
    Bel,
}

impl Modality {
    /// Token used in proof files and on the command line.
    pub fn token(self) -> &'static str {
        match self {
            Modality::Know => "K",
            Modality::Box => "box",
            Modality::Bel => "B",
        }
    }

    pub fn from_token(s: &str) -> Option<Modality> {
        match s {
            "K" => Some(Modality::Know),
            "box" | "[]" => Some(Modality::Box),
            "B" => Some(Modality::Bel),
            _ => None,
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Shared constructors for formula-shaped trees. Sugar is defined once here
/// in terms of the primitives so formulas and scheme templates desugar
/// identically.
pub trait Tree: Sized + Clone {
    fn prop(name: &str) -> Self;
    fn not(self) -> Self;
    fn and(self, other: Self) -> Self;
    fn modal(m: Modality, inner: Self) -> Self;

    fn know(self) -> Self {
        Self::modal(Modality::Know, self)
    }
    fn boxed(self) -> Self {
        Self::modal(Modality::Box, self)
    }
    fn bel(self) -> Self {
        Self::modal(Modality::Bel, self)
    }
    fn or(self, other: Self) -> Self {
        self.not().and(other.not()).not()
    }
    fn implies(self, other: Self) -> Self {
        self.and(other.not()).not()
    }
    fn iff(self, other: Self) -> Self {
        self.clone().implies(other.clone()).and(other.implies(self))
    }
    fn bottom() -> Self {
        let p = Self::prop(BOTTOM_PROP);
        p.clone().and(p.not())
    }
    fn top() -> Self {
        Self::bottom().not()
    }
    fn dia(self) -> Self {
        self.not().boxed().not()
    }
    fn hat_k(self) -> Self {
        self.not().know().not()
    }
    fn hat_b(self) -> Self {
        self.not().bel().not()
    }
}

impl Tree for Formula {
    fn prop(name: &str) -> Self {
        Formula::Prop(name.to_string())
    }
    fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }
    fn and(self, other: Self) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }
    fn modal(m: Modality, inner: Self) -> Self {
        let inner = Box::new(inner);
        match m {
            Modality::Know => Formula::Know(inner),
            Modality::Box => Formula::Box(inner),
            Modality::Bel => Formula::Bel(inner),
        }
    }
}

/// Summary counts used to size instance pools.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    pub props: BTreeSet<String>,
    pub modal_depth: usize,
    pub size: usize,
}

/// The three syntactic translations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Translation {
    /// Knowability collapses into knowledge: `[]` becomes `K`.
    T,
    /// Belief is eliminated: `B f` becomes `K <> [] f`.
    E,
    /// Belief is guarded: `B f` becomes `B <> [] f`.
    Alpha,
}

impl Translation {
    pub fn from_name(s: &str) -> Option<Translation> {
        match s {
            "t" => Some(Translation::T),
            "e" => Some(Translation::E),
            "alpha" | "a" => Some(Translation::Alpha),
            _ => None,
        }
    }
}

impl Formula {
    pub fn p(name: &str) -> Formula {
        Formula::Prop(name.to_string())
    }

    /// The modality heading this formula, if any.
    pub fn head_modality(&self) -> Option<(Modality, &Formula)> {
        match self {
            Formula::Know(f) => Some((Modality::Know, f)),
            Formula::Box(f) => Some((Modality::Box, f)),
            Formula::Bel(f) => Some((Modality::Bel, f)),
            _ => None,
        }
    }

    /// `Some((a, b))` when this is the desugared form of `a -> b`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::And(a, nb) => match nb.as_ref() {
                    Formula::Not(b) => Some((a, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    pub fn measure(&self) -> Measure {
        let mut props = BTreeSet::new();
        let (modal_depth, size) = self.measure_into(&mut props);
        Measure { props, modal_depth, size }
    }

    fn measure_into(&self, props: &mut BTreeSet<String>) -> (usize, usize) {
        match self {
            Formula::Prop(name) => {
                props.insert(name.clone());
                (0, 1)
            }
            Formula::Not(f) => {
                let (d, s) = f.measure_into(props);
                (d, s + 1)
            }
            Formula::And(a, b) => {
                let (da, sa) = a.measure_into(props);
                let (db, sb) = b.measure_into(props);
                (da.max(db), sa + sb + 1)
            }
            Formula::Know(f) | Formula::Box(f) | Formula::Bel(f) => {
                let (d, s) = f.measure_into(props);
                (d + 1, s + 1)
            }
        }
    }

    /// Height of the syntax tree; a proposition has height 0.
    pub fn height(&self) -> usize {
        match self {
            Formula::Prop(_) => 0,
            Formula::Not(f) | Formula::Know(f) | Formula::Box(f) | Formula::Bel(f) => {
                f.height() + 1
            }
            Formula::And(a, b) => a.height().max(b.height()) + 1,
        }
    }

    pub fn props(&self) -> BTreeSet<String> {
        self.measure().props
    }

    pub fn contains(&self, m: Modality) -> bool {
        match self {
            Formula::Prop(_) => false,
            Formula::Not(f) => f.contains(m),
            Formula::And(a, b) => a.contains(m) || b.contains(m),
            _ => {
                let (head, inner) = self.head_modality().expect("modal node");
                head == m || inner.contains(m)
            }
        }
    }

    /// True when the only modality used is `B`.
    pub fn is_belief_only(&self) -> bool {
        !self.contains(Modality::Know) && !self.contains(Modality::Box)
    }

    /// Applies a translation bottom-up, so nested occurrences are rewritten too.
    pub fn translate(&self, kind: Translation) -> Formula {
        match self {
            Formula::Prop(_) => self.clone(),
            Formula::Not(f) => f.translate(kind).not(),
            Formula::And(a, b) => a.translate(kind).and(b.translate(kind)),
            Formula::Know(f) => f.translate(kind).know(),
            Formula::Box(f) => {
                let inner = f.translate(kind);
                match kind {
                    Translation::T => inner.know(),
                    _ => inner.boxed(),
                }
            }
            Formula::Bel(f) => {
                let inner = f.translate(kind);
                match kind {
                    Translation::T => inner.bel(),
                    Translation::E => inner.boxed().dia().know(),
                    Translation::Alpha => inner.boxed().dia().bel(),
                }
            }
        }
    }

    /// Canonical, fully parenthesised rendering; `parse` inverts it.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    /// Rendering that folds the primitive encodings of `->`, `|`, `<->`,
    /// `<>`, `true` and `false` back into their sugar. `parse` inverts it.
    pub fn render_sugared(&self) -> String {
        let mut out = String::new();
        self.sugar_into(&mut out);
        out
    }

    fn is_bottom(&self) -> bool {
        matches!(self, Formula::And(a, b) if **a == Formula::p(BOTTOM_PROP) && **b == Formula::p(BOTTOM_PROP).not())
    }

    fn binary_into(out: &mut String, a: &Formula, op: &str, b: &Formula) {
        out.push('(');
        a.sugar_into(out);
        out.push_str(op);
        b.sugar_into(out);
        out.push(')');
    }

    fn sugar_into(&self, out: &mut String) {
        match self {
            Formula::Prop(name) => out.push_str(name),
            Formula::Not(inner) => match inner.as_ref() {
                g if g.is_bottom() => out.push_str("true"),
                Formula::And(a, b) => match (a.as_ref(), b.as_ref()) {
                    (Formula::Not(x), Formula::Not(y)) if x.reads_as_disjunct() => {
                        Formula::binary_into(out, x, " | ", y)
                    }
                    (x, Formula::Not(y)) => Formula::binary_into(out, x, " -> ", y),
                    _ => {
                        out.push('~');
                        inner.sugar_into(out);
                    }
                },
                Formula::Box(g) if matches!(g.as_ref(), Formula::Not(_)) => {
                    out.push_str("<>");
                    g.negand().sugar_into(out);
                }
                _ => {
                    out.push('~');
                    inner.sugar_into(out);
                }
            },
            Formula::And(a, b) => {
                if self.is_bottom() {
                    return out.push_str("false");
                }
                match (a.as_implication(), b.as_implication()) {
                    (Some((x, y)), Some((y2, x2))) if x == x2 && y == y2 => {
                        Formula::binary_into(out, x, " <-> ", y)
                    }
                    _ => Formula::binary_into(out, a, " & ", b),
                }
            }
            Formula::Know(f) => {
                out.push_str("K ");
                f.sugar_into(out);
            }
            Formula::Box(f) => {
                out.push_str("[]");
                f.sugar_into(out);
            }
            Formula::Bel(f) => {
                out.push_str("B ");
                f.sugar_into(out);
            }
        }
    }

    /// Whether `~self | b` is better shown as `self | b` than `~self -> b`.
    fn reads_as_disjunct(&self) -> bool {
        match self {
            Formula::Prop(_) => true,
            Formula::Box(g) => !matches!(g.as_ref(), Formula::Not(_)),
            _ => false,
        }
    }

    /// The operand of a negation.
    fn negand(&self) -> &Formula {
        match self {
            Formula::Not(h) => h,
            _ => self,
        }
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Formula::Prop(name) => out.push_str(name),
            Formula::Not(f) => {
                out.push('~');
                f.render_into(out);
            }
            Formula::And(a, b) => {
                out.push('(');
                a.render_into(out);
                out.push_str(" & ");
                b.render_into(out);
                out.push(')');
            }
            Formula::Know(f) => {
                out.push_str("K ");
                f.render_into(out);
            }
            Formula::Box(f) => {
                out.push_str("[]");
                f.render_into(out);
            }
            Formula::Bel(f) => {
                out.push_str("B ");
                f.render_into(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
