//! Hilbert systems as named lists of axiom schemes plus necessitation rules.

use std::collections::BTreeSet;

use crate::models::{ScenarioClass, Semantics};
use crate::syntax::{Formula, Modality, SchemeTemplate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Logic {
    name: String,
    schemes: Vec<SchemeTemplate>,
    nec: BTreeSet<Modality>,
    semantics: Option<(Semantics, ScenarioClass)>,
}

impl Logic {
    /// Panics if two schemes share a name.
    pub fn new(name: impl Into<String>, schemes: Vec<SchemeTemplate>, nec: impl IntoIterator<Item = Modality>) -> Self {
        let mut seen = BTreeSet::new();
        for s in &schemes {
            assert!(seen.insert(s.name().to_string()), "duplicate scheme {}", s.name());
        }
        Logic { name: name.into(), schemes, nec: nec.into_iter().collect(), semantics: None }
    }

    /// Records the semantics and scenario class this logic is sound for.
    pub fn with_semantics(mut self, sem: Semantics, cls: ScenarioClass) -> Self {
        self.semantics = Some((sem, cls));
        self
    }

    /// A copy named `name` with `extra` schemes appended.
    pub fn extend(&self, name: impl Into<String>, extra: Vec<SchemeTemplate>) -> Self {
        let mut schemes = self.schemes.clone();
        schemes.extend(extra);
        Logic::new(name, schemes, self.nec.iter().copied())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Schemes in registry order.
    pub fn schemes(&self) -> &[SchemeTemplate] {
        &self.schemes
    }

    pub fn scheme(&self, name: &str) -> Option<&SchemeTemplate> {
        self.schemes.iter().find(|s| s.name() == name)
    }

    pub fn nec_modalities(&self) -> &BTreeSet<Modality> {
        &self.nec
    }

    /// Propositional reasoning is built into every logic.
    pub fn includes_cpl(&self) -> bool {
        true
    }

    pub fn semantics(&self) -> Option<(Semantics, ScenarioClass)> {
        self.semantics
    }

    /// Name of the first scheme, in registry order, that `f` instantiates.
    pub fn is_axiom_instance(&self, f: &Formula) -> Option<&str> {
        self.schemes.iter().find(|s| s.match_formula(f).is_some()).map(|s| s.name())
    }

    /// True when every scheme and necessitation rule of `self` is in `other`.
    pub fn is_contained_in(&self, other: &Logic) -> bool {
        self.nec.is_subset(&other.nec)
            && self.schemes.iter().all(|s| other.scheme(s.name()).is_some_and(|t| t.pattern() == s.pattern()))
    }
}

/// Scheme source text, with `*` standing for the modality token.
const MODAL_SCHEMES: &[(&str, &str)] = &[
    ("K", "*(?phi -> ?psi) -> (*?phi -> *?psi)"),
    ("D", "*?phi -> ~*~?phi"),
    ("T", "*?phi -> ?phi"),
    ("4", "*?phi -> **?phi"),
    (".2", "~*~*?phi -> *~*~?phi"),
    ("5", "~*?phi -> *~*?phi"),
];

const STAL_SCHEMES: &[(&str, &str)] = &[
    ("D_B", "B ?phi -> ~B ~?phi"),
    ("sPI", "B ?phi -> K B ?phi"),
    ("sNI", "~B ?phi -> K ~B ?phi"),
    ("KB", "K ?phi -> B ?phi"),
    ("FB", "B ?phi -> B K ?phi"),
];

const BELIEF_CORE: &[(&str, &str)] = &[
    ("K_B", "B(?phi -> ?psi) -> (B ?phi -> B ?psi)"),
    ("sPI", "B ?phi -> K B ?phi"),
    ("KB", "K ?phi -> B ?phi"),
    ("RB", "B ?phi -> B []?phi"),
];

const WF: (&str, &str) = ("wF", "B ?phi -> <>?phi");
const CB: (&str, &str) = ("CB", "B([]?phi | []~[]?phi)");
const D_B: (&str, &str) = ("D_B", "B ?phi -> ~B ~?phi");
const KI: (&str, &str) = ("KI", "K ?phi -> []?phi");
const EQ: (&str, &str) = ("EQ", "B ?phi <-> K <>[]?phi");

fn suffix(m: Modality) -> &'static str {
    match m {
        Modality::Know => "K",
        Modality::Box => "box",
        Modality::Bel => "B",
    }
}

fn operator(m: Modality) -> &'static str {
    match m {
        Modality::Know => "K ",
        Modality::Box => "[]",
        Modality::Bel => "B ",
    }
}

fn schemes(table: &[(&str, &str)]) -> Vec<SchemeTemplate> {
    table.iter().map(|(n, t)| SchemeTemplate::parse(*n, t).expect("builtin scheme parses")).collect()
}

/// The named schemes of `m` among `K`, `D`, `T`, `4`, `.2`, `5`.
pub fn modal_schemes(m: Modality, which: &[&str]) -> Vec<SchemeTemplate> {
    which
        .iter()
        .map(|w| {
            let (_, text) = MODAL_SCHEMES.iter().find(|(n, _)| n == w).expect("known modal scheme");
            let name = format!("{w}_{}", suffix(m));
            SchemeTemplate::parse(name, &text.replace('*', operator(m))).expect("builtin scheme parses")
        })
        .collect()
}

/// All builtin logics in a fixed order.
#[derive(Clone, Debug)]
pub struct Registry {
    logics: Vec<Logic>,
}

impl Registry {
    pub fn get(&self, name: &str) -> Option<&Logic> {
        self.logics.iter().find(|l| l.name() == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Logic> {
        self.logics.iter()
    }

    pub fn names(&self) -> Vec<&str> {
        self.logics.iter().map(|l| l.name()).collect()
    }
}

/// Builds every builtin logic. Names: `K_K`, `S4_box`, `KD45_B` and so on for
/// the single-modality systems; `Stal`; `EL`, `EL+`, `SEL`; `ELB` with its
/// extensions `ELB+D_B`, `ELB+wF`, `ELB+CB`.
pub fn builtin_logics() -> Registry {
    use Modality::*;
    let families: [(&str, &[&str]); 5] = [
        ("K", &["K"]),
        ("S4", &["K", "T", "4"]),
        ("S4.2", &["K", "T", "4", ".2"]),
        ("S5", &["K", "T", "4", "5"]),
        ("KD45", &["K", "D", "4", "5"]),
    ];
    let mut logics = Vec::new();
    for m in [Know, Box, Bel] {
        for (family, which) in families {
            let mut l = Logic::new(format!("{family}_{}", suffix(m)), modal_schemes(m, which), [m]);
            let sound = matches!((family, m), ("S5", Know) | ("S4", Box) | ("KD45", Bel) | ("K", _));
            if sound {
                l = l.with_semantics(Semantics::Strong, ScenarioClass::All);
            }
            logics.push(l);
        }
    }

    let mut stal = modal_schemes(Know, &["K", "T", "4"]);
    stal.extend(schemes(STAL_SCHEMES));
    logics.push(Logic::new("Stal", stal, [Know]));

    let mut el = modal_schemes(Know, &["K", "T", "4", "5"]);
    el.extend(modal_schemes(Box, &["K", "T", "4"]));
    el.extend(schemes(&[KI]));
    let el = Logic::new("EL", el, [Know, Box]).with_semantics(Semantics::Strong, ScenarioClass::All);
    let el_plus = el.extend("EL+", schemes(&[EQ])).with_semantics(Semantics::Strong, ScenarioClass::All);

    let mut sel = schemes(BELIEF_CORE);
    sel.extend(schemes(&[WF, CB]));
    let sel = el.extend("SEL", sel).with_semantics(Semantics::Strong, ScenarioClass::All);

    let elb = el.extend("ELB", schemes(BELIEF_CORE)).with_semantics(Semantics::Ed, ScenarioClass::All);
    let elb_d = elb.extend("ELB+D_B", schemes(&[D_B])).with_semantics(Semantics::Ed, ScenarioClass::Consistent);
    let elb_wf = elb.extend("ELB+wF", schemes(&[WF])).with_semantics(Semantics::Ed, ScenarioClass::Dense);
    let elb_cb = elb.extend("ELB+CB", schemes(&[CB])).with_semantics(Semantics::Ae, ScenarioClass::All);

    logics.extend([el, el_plus, sel, elb, elb_d, elb_wf, elb_cb]);
    Registry { logics }
}
