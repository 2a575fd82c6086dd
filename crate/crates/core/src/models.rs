//! Topological subset models and their three satisfaction relations.
//!
//! * `strong`: scenarios `(x, U)`; `B f` holds when the interior of the
//!   extension of `f` is dense in `U`.
//! * `ed`: scenarios `(x, U, V)` with an open doxastic range `V ⊆ U`; `B f`
//!   holds when `V` is inside the extension.
//! * `ae`: as `ed`, but `V` only needs to be inside the extension up to a
//!   nowhere dense set.
//!
//! In every semantics `K`, `[]` and `B` leave the ranges untouched, so the
//! extension of a formula under a fixed `(U, V)` is computed bottom-up from
//! the extensions of its parts, and the extension of any `K`/`B` formula is
//! either `U` or empty.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::set::PointSet;
use crate::syntax::{Formula, Modality};
use crate::topology::{TopoSpace, TopologyError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("valuation of {0:?} mentions points outside the space")]
    ValuationNotSubset(String),
    #[error("invalid scenario: {0}")]
    ScenarioInvalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Strong,
    Ed,
    Ae,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [Semantics::Strong, Semantics::Ed, Semantics::Ae];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Strong => "strong",
            Semantics::Ed => "ed",
            Semantics::Ae => "ae",
        }
    }

    /// Whether scenarios carry a doxastic range.
    pub fn uses_doxastic_range(self) -> bool {
        self != Semantics::Strong
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strong" => Ok(Semantics::Strong),
            "ed" => Ok(Semantics::Ed),
            "ae" => Ok(Semantics::Ae),
            _ => Err(format!("unknown semantics {s:?} (expected strong, ed or ae)")),
        }
    }
}

/// Restriction on the e-d scenarios quantified over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioClass {
    All,
    /// `V` is non-empty.
    Consistent,
    /// `U ⊆ cl(V)`.
    Dense,
    /// `V = U`.
    #[serde(rename = "veq", alias = "v_equals_u")]
    VEqualsU,
}

impl ScenarioClass {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioClass::All => "all",
            ScenarioClass::Consistent => "consistent",
            ScenarioClass::Dense => "dense",
            ScenarioClass::VEqualsU => "veq",
        }
    }
}

impl fmt::Display for ScenarioClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(ScenarioClass::All),
            "consistent" => Ok(ScenarioClass::Consistent),
            "dense" => Ok(ScenarioClass::Dense),
            "veq" | "v_equals_u" => Ok(ScenarioClass::VEqualsU),
            _ => Err(format!("unknown scenario class {s:?} (expected all, consistent, dense or veq)")),
        }
    }
}

/// An evaluation point: `(x, U)` when `v` is `None`, `(x, U, V)` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scenario {
    pub x: usize,
    pub u: PointSet,
    pub v: Option<PointSet>,
}

impl Scenario {
    pub fn epistemic(x: usize, u: PointSet) -> Self {
        Scenario { x, u, v: None }
    }

    pub fn ed(x: usize, u: PointSet, v: PointSet) -> Self {
        Scenario { x, u, v: Some(v) }
    }

    pub fn range(&self) -> Range {
        Range { u: self.u, v: self.v.unwrap_or(self.u) }
    }

    /// Lexicographic on `(x, U, V)`.
    pub fn lex_cmp(&self, other: &Scenario) -> Ordering {
        self.x
            .cmp(&other.x)
            .then_with(|| self.u.lex_cmp(other.u))
            .then_with(|| match (self.v, other.v) {
                (Some(a), Some(b)) => a.lex_cmp(b),
                (a, b) => a.is_some().cmp(&b.is_some()),
            })
    }
}

/// The epistemic and doxastic ranges of a scenario. Under strong semantics
/// `v` is unused and set equal to `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Range {
    pub u: PointSet,
    pub v: PointSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioFlags {
    pub consistent: bool,
    pub dense: bool,
    pub v_equals_u: bool,
}

impl ScenarioFlags {
    pub fn in_class(self, cls: ScenarioClass) -> bool {
        match cls {
            ScenarioClass::All => true,
            ScenarioClass::Consistent => self.consistent,
            ScenarioClass::Dense => self.dense,
            ScenarioClass::VEqualsU => self.v_equals_u,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    pub witness: Option<Scenario>,
}

/// A topological space with a valuation of proposition names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetModel {
    space: TopoSpace,
    valuation: BTreeMap<String, PointSet>,
}

impl SubsetModel {
    pub fn new(space: TopoSpace, valuation: BTreeMap<String, PointSet>) -> Result<Self, ModelError> {
        let whole = space.whole();
        if let Some((name, _)) = valuation.iter().find(|(_, s)| !s.is_subset(whole)) {
            return Err(ModelError::ValuationNotSubset(name.clone()));
        }
        Ok(SubsetModel { space, valuation })
    }

    /// Builds a model from a valuation given as point names.
    pub fn with_named_valuation(space: TopoSpace, valuation: &BTreeMap<String, Vec<String>>) -> Result<Self, ModelError> {
        let mut masks = BTreeMap::new();
        for (prop, names) in valuation {
            let set = space.set_of(names).map_err(|_| ModelError::ValuationNotSubset(prop.clone()))?;
            masks.insert(prop.clone(), set);
        }
        SubsetModel::new(space, masks)
    }

    pub fn space(&self) -> &TopoSpace {
        &self.space
    }

    pub fn valuation(&self) -> &BTreeMap<String, PointSet> {
        &self.valuation
    }

    /// Unknown propositions are false everywhere.
    pub fn value_of(&self, prop: &str) -> PointSet {
        self.valuation.get(prop).copied().unwrap_or_default()
    }

    pub fn check_scenario(&self, s: &Scenario, sem: Semantics) -> Result<(), ModelError> {
        let invalid = |msg: String| Err(ModelError::ScenarioInvalid(msg));
        if s.x >= self.space.len() {
            return invalid(format!("point #{} is outside the space", s.x));
        }
        if !self.space.is_open(s.u) {
            return invalid(format!("U = {:?} is not open", self.space.names_of(s.u)));
        }
        if !s.u.contains(s.x) {
            return invalid(format!("{} is not in U", self.space.points()[s.x]));
        }
        if sem.uses_doxastic_range() {
            let Some(v) = s.v else {
                return invalid(format!("{sem} semantics needs a doxastic range V"));
            };
            if !self.space.is_open(v) {
                return invalid(format!("V = {:?} is not open", self.space.names_of(v)));
            }
            if !v.is_subset(s.u) {
                return invalid("V is not a subset of U".to_string());
            }
        }
        Ok(())
    }

    /// Extension of `f` under the ranges `(U, V)`: the points of `U` where
    /// `f` holds.
    pub fn extension(&self, u: PointSet, v: Option<PointSet>, f: &Formula, sem: Semantics) -> Result<PointSet, ModelError> {
        if !self.space.is_open(u) {
            return Err(ModelError::ScenarioInvalid(format!("U = {:?} is not open", self.space.names_of(u))));
        }
        let v = if sem.uses_doxastic_range() {
            let v = v.ok_or_else(|| ModelError::ScenarioInvalid(format!("{sem} semantics needs a doxastic range V")))?;
            if !self.space.is_open(v) || !v.is_subset(u) {
                return Err(ModelError::ScenarioInvalid("V must be an open subset of U".to_string()));
            }
            v
        } else {
            u
        };
        Ok(self.ext(Range { u, v }, f, sem))
    }

    /// Unchecked extension; `range` must be admissible for `sem`.
    pub fn ext(&self, range: Range, f: &Formula, sem: Semantics) -> PointSet {
        match f {
            Formula::Prop(p) => self.value_of(p) & range.u,
            Formula::Not(g) => range.u - self.ext(range, g, sem),
            Formula::And(a, b) => self.ext(range, a, sem) & self.ext(range, b, sem),
            _ => {
                let (m, g) = f.head_modality().expect("modal node");
                modal_step(&self.space, m, self.ext(range, g, sem), range, sem)
            }
        }
    }

    pub fn eval(&self, s: &Scenario, f: &Formula, sem: Semantics) -> Result<bool, ModelError> {
        self.check_scenario(s, sem)?;
        Ok(self.ext(s.range(), f, sem).contains(s.x))
    }

    pub fn classify(&self, s: &Scenario) -> Result<ScenarioFlags, ModelError> {
        self.check_scenario(s, Semantics::Ed)?;
        Ok(self.range_flags(s.range()))
    }

    pub fn range_flags(&self, r: Range) -> ScenarioFlags {
        ScenarioFlags {
            consistent: !r.v.is_empty(),
            dense: r.u.is_subset(self.space.cl(r.v)),
            v_equals_u: r.u == r.v,
        }
    }

    /// All admissible ranges for `sem` in class `cls` (the class is ignored
    /// under strong semantics). Empty `U` is skipped: it has no scenarios.
    pub fn ranges(&self, sem: Semantics, cls: ScenarioClass) -> Vec<Range> {
        let opens = self.space.opens();
        let mut out = Vec::new();
        for &u in opens.iter().filter(|u| !u.is_empty()) {
            if !sem.uses_doxastic_range() {
                out.push(Range { u, v: u });
                continue;
            }
            for &v in opens.iter().filter(|v| v.is_subset(u)) {
                let r = Range { u, v };
                if self.range_flags(r).in_class(cls) {
                    out.push(r);
                }
            }
        }
        out
    }

    /// All scenarios for `sem` in class `cls`, lexicographically ordered.
    pub fn scenarios(&self, sem: Semantics, cls: ScenarioClass) -> Vec<Scenario> {
        let mut out: Vec<Scenario> = self
            .ranges(sem, cls)
            .into_iter()
            .flat_map(|r| {
                let v = sem.uses_doxastic_range().then_some(r.v);
                r.u.iter().map(move |x| Scenario { x, u: r.u, v })
            })
            .collect();
        out.sort_by(Scenario::lex_cmp);
        out
    }

    /// Checks `f` at every scenario of the class; on failure the witness is
    /// the lexicographically first failing scenario.
    pub fn valid_in_model(&self, f: &Formula, sem: Semantics, cls: ScenarioClass) -> Validity {
        let witness = self
            .ranges(sem, cls)
            .into_iter()
            .filter_map(|r| {
                let x = (r.u - self.ext(r, f, sem)).first()?;
                Some(Scenario { x, u: r.u, v: sem.uses_doxastic_range().then_some(r.v) })
            })
            .min_by(Scenario::lex_cmp);
        Validity { valid: witness.is_none(), witness }
    }

    /// First scenario (lexicographically) where `f` holds.
    pub fn satisfying_scenario(&self, f: &Formula, sem: Semantics, cls: ScenarioClass) -> Option<Scenario> {
        self.ranges(sem, cls)
            .into_iter()
            .filter_map(|r| {
                let x = self.ext(r, f, sem).first()?;
                Some(Scenario { x, u: r.u, v: sem.uses_doxastic_range().then_some(r.v) })
            })
            .min_by(Scenario::lex_cmp)
    }
}

/// Extension of `m operand` given the extension of the operand under `range`.
pub(crate) fn modal_step(space: &TopoSpace, m: Modality, operand: PointSet, range: Range, sem: Semantics) -> PointSet {
    let all_or_nothing = |b: bool| if b { range.u } else { PointSet::EMPTY };
    match m {
        Modality::Know => all_or_nothing(operand == range.u),
        Modality::Box => space.int(operand) & range.u,
        Modality::Bel => all_or_nothing(match sem {
            Semantics::Strong => range.u.is_subset(space.cl(space.int(operand))),
            Semantics::Ed => range.v.is_subset(operand),
            Semantics::Ae => space.almost_subset(range.v, operand),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    fn sierpinski_p_a() -> SubsetModel {
        let space = TopoSpace::validate(&["a", "b"], &[names(&[]), names(&["a"]), names(&["a", "b"])]).unwrap();
        let val = BTreeMap::from([("p".to_string(), names(&["a"]))]);
        SubsetModel::with_named_valuation(space, &val).unwrap()
    }

    fn discrete_p_a() -> SubsetModel {
        let space = TopoSpace::validate(&["a", "b"], &[names(&[]), names(&["a"]), names(&["b"]), names(&["a", "b"])]).unwrap();
        let val = BTreeMap::from([("p".to_string(), names(&["a"]))]);
        SubsetModel::with_named_valuation(space, &val).unwrap()
    }

    const A: usize = 0;
    const B: usize = 1;

    fn x() -> PointSet {
        PointSet::full(2)
    }

    fn only_a() -> PointSet {
        PointSet::singleton(A)
    }

    #[test]
    fn footnote_extensions() {
        let m = sierpinski_p_a();
        assert_eq!(m.extension(x(), None, &parse("<> p").unwrap(), Semantics::Strong).unwrap(), x());
        assert_eq!(m.extension(x(), None, &parse("[] p").unwrap(), Semantics::Strong).unwrap(), only_a());
        let cb = parse("B([]p | []~[]p)").unwrap();
        assert_eq!(m.extension(x(), Some(x()), &cb, Semantics::Ed).unwrap(), PointSet::EMPTY);
    }

    #[test]
    fn moore_sentence_pair() {
        let m = sierpinski_p_a();
        let s = Scenario::epistemic(A, x());
        assert!(m.eval(&s, &parse("[](p & ~K p)").unwrap(), Semantics::Strong).unwrap());
        let known = parse("K(p & ~K p)").unwrap();
        for s in m.scenarios(Semantics::Strong, ScenarioClass::All) {
            assert!(!m.eval(&s, &known, Semantics::Strong).unwrap());
        }
    }

    #[test]
    fn belief_is_not_factive() {
        let m = sierpinski_p_a();
        let s = Scenario::epistemic(B, x());
        assert!(m.eval(&s, &parse("B p").unwrap(), Semantics::Strong).unwrap());
        assert!(!m.eval(&s, &parse("p").unwrap(), Semantics::Strong).unwrap());
        assert!(m.eval(&s, &parse("~[]p & ~[]~[]p").unwrap(), Semantics::Strong).unwrap());
    }

    #[test]
    fn classify_examples() {
        let m = sierpinski_p_a();
        let f = m.classify(&Scenario::ed(A, x(), only_a())).unwrap();
        assert_eq!(f, ScenarioFlags { consistent: true, dense: true, v_equals_u: false });
        let f = discrete_p_a().classify(&Scenario::ed(A, x(), only_a())).unwrap();
        assert!(!f.dense);
        for u in [only_a(), x()] {
            let f = m.classify(&Scenario::ed(A, u, u)).unwrap();
            assert_eq!(f, ScenarioFlags { consistent: true, dense: true, v_equals_u: true });
        }
    }

    #[test]
    fn valid_in_model_examples() {
        let m = sierpinski_p_a();
        let cb = parse("B([]p | []~[]p)").unwrap();
        assert!(m.valid_in_model(&cb, Semantics::Strong, ScenarioClass::All).valid);

        let v = m.valid_in_model(&cb, Semantics::Ed, ScenarioClass::All);
        assert!(!v.valid);
        assert_eq!(v.witness, Some(Scenario::ed(A, x(), x())));

        let wf = parse("B p -> <> p").unwrap();
        assert!(m.valid_in_model(&wf, Semantics::Ed, ScenarioClass::Dense).valid);
    }

    #[test]
    fn scenario_listing() {
        let m = sierpinski_p_a();
        let ep = m.scenarios(Semantics::Strong, ScenarioClass::All);
        assert_eq!(ep, vec![Scenario::epistemic(A, only_a()), Scenario::epistemic(A, x()), Scenario::epistemic(B, x())]);
        // V ranges over {∅, {a}} inside {a} and {∅, {a}, X} inside X.
        let ed = m.scenarios(Semantics::Ed, ScenarioClass::All);
        assert_eq!(ed.len(), 2 + 3 * 2);
    }

    #[test]
    fn invalid_scenarios_are_rejected() {
        let m = sierpinski_p_a();
        let p = parse("p").unwrap();
        let bad = [
            (Scenario::epistemic(B, only_a()), Semantics::Strong),
            (Scenario::epistemic(A, PointSet::singleton(B)), Semantics::Strong),
            (Scenario::epistemic(A, x()), Semantics::Ed),
            (Scenario::ed(A, only_a(), x()), Semantics::Ae),
            (Scenario::epistemic(7, x()), Semantics::Strong),
        ];
        for (s, sem) in bad {
            assert!(matches!(m.eval(&s, &p, sem), Err(ModelError::ScenarioInvalid(_))), "{s:?}");
        }
    }

    #[test]
    fn unknown_props_are_empty() {
        let m = sierpinski_p_a();
        assert_eq!(m.extension(x(), None, &parse("zz").unwrap(), Semantics::Strong).unwrap(), PointSet::EMPTY);
    }

    #[test]
    fn belief_clauses_differ_on_the_discrete_space() {
        let m = discrete_p_a();
        let s = Scenario::ed(B, x(), only_a());
        assert!(m.eval(&s, &parse("B p").unwrap(), Semantics::Ed).unwrap());
        assert!(m.eval(&s, &parse("B p").unwrap(), Semantics::Ae).unwrap());
        assert!(!m.eval(&s, &parse("<> p").unwrap(), Semantics::Ed).unwrap());
    }
}
