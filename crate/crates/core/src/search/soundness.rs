//! Soundness reports for axiom schemes over generated instance pools.
//!
//! Within a model, the extension of an instance under a range depends only
//! on the extensions of the substituted formulas under that range. Pool
//! formulas are therefore grouped by their extension vector over all ranges
//! of the class, the scheme is checked once per tuple of groups, and only
//! failing tuples are expanded back into instances.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use super::{enumerate_models, Bounds, SearchError};
use crate::io::{ModelSpec, ScenarioSpec};
use crate::models::{modal_step, Range, Scenario, ScenarioClass, Semantics, SubsetModel};
use crate::set::PointSet;
use crate::syntax::{Formula, Modality, Pattern, SchemeTemplate, Substitution};

/// Largest number of instances a report will consider.
pub const MAX_INSTANCES: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub instance_index: usize,
    pub instance: Formula,
    pub model_index: usize,
    pub model: SubsetModel,
    pub scenario: Scenario,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub scheme: String,
    pub semantics: Semantics,
    pub class: ScenarioClass,
    pub max_points: usize,
    pub pool_size: usize,
    pub instances: usize,
    pub models: usize,
    /// Instance-model pairs examined.
    pub checked: u64,
    /// One entry per failing instance, at its first countermodel, in
    /// instance order.
    pub violations: Vec<Violation>,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "model": ModelSpec::of(&v.model),
                    "scenario": ScenarioSpec::of(&v.scenario, v.model.space()),
                    "instance": v.instance.render_sugared(),
                })
            })
            .collect();
        json!({
            "scheme": self.scheme,
            "semantics": self.semantics,
            "class": self.class,
            "max_points": self.max_points,
            "pool_size": self.pool_size,
            "instances": self.instances,
            "models": self.models,
            "checked": self.checked,
            "violating_instances": self.violations.len(),
            "violations": violations,
        })
    }
}

/// Subformulas shared across the pool, children before parents.
#[derive(Clone, Copy)]
enum Node {
    Prop(usize),
    Not(usize),
    And(usize, usize),
    Modal(Modality, usize),
    Meta(usize),
}

#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    ids: HashMap<Formula, usize>,
    props: Vec<String>,
}

impl Arena {
    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn prop(&mut self, p: &str) -> usize {
        let k = match self.props.iter().position(|q| q == p) {
            Some(k) => k,
            None => {
                self.props.push(p.to_string());
                self.props.len() - 1
            }
        };
        self.push(Node::Prop(k))
    }

    fn intern(&mut self, f: &Formula) -> usize {
        if let Some(&id) = self.ids.get(f) {
            return id;
        }
        let node = match f {
            Formula::Prop(p) => {
                let id = self.prop(p);
                self.ids.insert(f.clone(), id);
                return id;
            }
            Formula::Not(g) => Node::Not(self.intern(g)),
            Formula::And(a, b) => {
                let a = self.intern(a);
                Node::And(a, self.intern(b))
            }
            _ => {
                let (m, g) = f.head_modality().expect("modal node");
                Node::Modal(m, self.intern(g))
            }
        };
        let id = self.push(node);
        self.ids.insert(f.clone(), id);
        id
    }

    /// Appends the pattern's nodes; metavariables are indices into `metas`.
    fn pattern(&mut self, p: &Pattern, metas: &[String]) -> usize {
        let node = match p {
            Pattern::Meta(m) => Node::Meta(metas.iter().position(|x| x == m).expect("declared metavariable")),
            Pattern::Prop(q) => return self.prop(q),
            Pattern::Not(g) => Node::Not(self.pattern(g, metas)),
            Pattern::And(a, b) => {
                let a = self.pattern(a, metas);
                Node::And(a, self.pattern(b, metas))
            }
            Pattern::Modal(m, g) => Node::Modal(*m, self.pattern(g, metas)),
        };
        self.push(node)
    }

    /// Extensions of nodes `range` under `r`, given earlier values in `vals`.
    fn eval(&self, nodes: std::ops::Range<usize>, vals: &mut [PointSet], metas: &[PointSet], m: &SubsetModel, r: Range, sem: Semantics) {
        for id in nodes {
            vals[id] = match self.nodes[id] {
                Node::Prop(k) => m.value_of(&self.props[k]) & r.u,
                Node::Not(a) => r.u - vals[a],
                Node::And(a, b) => vals[a] & vals[b],
                Node::Modal(op, a) => modal_step(m.space(), op, vals[a], r, sem),
                Node::Meta(k) => metas[k],
            };
        }
    }
}

/// Checks every instance of `scheme` over `pool` (one pool formula per
/// metavariable, all combinations) in every model within `bounds`.
pub fn scheme_soundness_report(
    scheme: &SchemeTemplate,
    sem: Semantics,
    cls: ScenarioClass,
    bounds: &Bounds,
    pool: &[Formula],
) -> Result<SoundnessReport, SearchError> {
    let metas: Vec<String> = scheme.metavars().iter().cloned().collect();
    let arity = metas.len();
    let instances = pool.len().checked_pow(arity as u32).filter(|&n| n <= MAX_INSTANCES).ok_or(SearchError::BoundExceeded {
        what: "scheme instances",
        requested: pool.len().saturating_pow(arity as u32),
        max: MAX_INSTANCES,
    })?;

    let mut arena = Arena::default();
    let roots: Vec<usize> = pool.iter().map(|f| arena.intern(f)).collect();
    let pool_end = arena.nodes.len();
    let scheme_root = arena.pattern(scheme.pattern(), &metas);
    let mut bounds = bounds.covering(pool);
    for p in &arena.props {
        if !bounds.props.contains(p) {
            bounds.props.push(p.clone());
        }
    }
    let models = enumerate_models(&bounds)?;

    // For each model, the failing instances, ascending.
    let per_model: Vec<Vec<usize>> = models.map_all(bounds.jobs, |_, m| {
        let ranges = m.ranges(sem, cls);
        if ranges.is_empty() || instances == 0 {
            return Vec::new();
        }
        let mut vals = vec![PointSet::EMPTY; arena.nodes.len()];
        let mut denotations: Vec<Vec<PointSet>> = vec![Vec::with_capacity(ranges.len()); roots.len()];
        for &r in &ranges {
            arena.eval(0..pool_end, &mut vals, &[], m, r, sem);
            for (d, &root) in denotations.iter_mut().zip(&roots) {
                d.push(vals[root]);
            }
        }
        let mut class_of = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut reps: Vec<usize> = Vec::new();
        for (i, d) in denotations.iter().enumerate() {
            let c = *class_of.entry(d.clone()).or_insert_with(|| {
                members.push(Vec::new());
                reps.push(i);
                reps.len() - 1
            });
            members[c].push(i);
        }

        let classes = reps.len();
        let mut failing = Vec::new();
        let mut tuple = vec![0usize; arity];
        let mut binding = vec![PointSet::EMPTY; arity];
        'tuples: loop {
            let fails = ranges.iter().enumerate().any(|(k, &r)| {
                for (slot, &c) in binding.iter_mut().zip(&tuple) {
                    *slot = denotations[reps[c]][k];
                }
                arena.eval(pool_end..scheme_root + 1, &mut vals, &binding, m, r, sem);
                !r.u.is_subset(vals[scheme_root])
            });
            if fails {
                expand(&tuple, &members, pool.len(), &mut failing);
            }
            for slot in (0..arity).rev() {
                tuple[slot] += 1;
                if tuple[slot] < classes {
                    continue 'tuples;
                }
                tuple[slot] = 0;
            }
            break;
        }
        failing.sort_unstable();
        failing
    });

    let mut first_model: BTreeMap<usize, usize> = BTreeMap::new();
    for (mi, failing) in per_model.iter().enumerate() {
        for &inst in failing {
            first_model.entry(inst).or_insert(mi);
        }
    }
    let violations = first_model
        .into_iter()
        .map(|(inst, mi)| {
            let instance = instantiate(scheme, &metas, pool, inst);
            let model = models.model(mi);
            let scenario = model.valid_in_model(&instance, sem, cls).witness.expect("failing instance has a witness");
            Violation { instance_index: inst, instance, model_index: mi, model, scenario }
        })
        .collect();

    Ok(SoundnessReport {
        scheme: scheme.name().to_string(),
        semantics: sem,
        class: cls,
        max_points: bounds.max_points,
        pool_size: pool.len(),
        instances,
        models: models.len(),
        checked: instances as u64 * models.len() as u64,
        violations,
    })
}

/// Adds every instance index whose pool formulas fall in the classes of
/// `tuple`; the first metavariable is the most significant digit.
fn expand(tuple: &[usize], members: &[Vec<usize>], base: usize, out: &mut Vec<usize>) {
    let mut partial = vec![0usize];
    for &c in tuple {
        partial = partial.iter().flat_map(|&acc| members[c].iter().map(move |&i| acc * base + i)).collect();
    }
    out.extend(partial);
}

fn instantiate(scheme: &SchemeTemplate, metas: &[String], pool: &[Formula], mut index: usize) -> Formula {
    let mut sigma = Substitution::new();
    for m in metas.iter().rev() {
        sigma.insert(m.clone(), pool[index % pool.len()].clone());
        index /= pool.len();
    }
    scheme.instantiate(&sigma).expect("all metavariables bound")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::builtin_logics;
    use crate::parse;

    fn scheme(logic: &str, name: &str) -> SchemeTemplate {
        builtin_logics().get(logic).unwrap().scheme(name).unwrap().clone()
    }

    fn small_pool() -> Vec<Formula> {
        crate::search::formulas_up_to(&["p".into(), "q".into()], &[Modality::Know, Modality::Box, Modality::Bel], 1)
    }

    /// Instance-by-instance check without grouping.
    fn naive(s: &SchemeTemplate, sem: Semantics, cls: ScenarioClass, b: &Bounds, pool: &[Formula]) -> BTreeMap<usize, usize> {
        let metas: Vec<String> = s.metavars().iter().cloned().collect();
        let models = enumerate_models(&b.covering(pool)).unwrap();
        let n = pool.len().pow(metas.len() as u32);
        let mut out = BTreeMap::new();
        for inst in 0..n {
            let f = instantiate(s, &metas, pool, inst);
            if let Some(mi) = models.iter().position(|m| !m.valid_in_model(&f, sem, cls).valid) {
                out.insert(inst, mi);
            }
        }
        out
    }

    #[test]
    fn grouping_agrees_with_naive_check() {
        let pool = small_pool();
        let b = Bounds::new(2);
        for (logic, name, sem, cls) in [
            ("SEL", "CB", Semantics::Ed, ScenarioClass::Consistent),
            ("SEL", "wF", Semantics::Ed, ScenarioClass::All),
            ("SEL", "K_B", Semantics::Ae, ScenarioClass::All),
            ("Stal", "FB", Semantics::Strong, ScenarioClass::All),
            ("S5_box", "5_box", Semantics::Strong, ScenarioClass::All),
        ] {
            let s = scheme(logic, name);
            let report = scheme_soundness_report(&s, sem, cls, &b, &pool).unwrap();
            let got: BTreeMap<usize, usize> = report.violations.iter().map(|v| (v.instance_index, v.model_index)).collect();
            assert_eq!(got, naive(&s, sem, cls, &b, &pool), "{name}");
        }
    }

    #[test]
    fn report_examples() {
        let pool = small_pool();
        let b = Bounds::new(2);
        let cb = scheme("SEL", "CB");
        assert!(scheme_soundness_report(&cb, Semantics::Ae, ScenarioClass::All, &b, &pool).unwrap().is_sound());
        let r = scheme_soundness_report(&cb, Semantics::Ed, ScenarioClass::Consistent, &b, &pool).unwrap();
        assert!(!r.is_sound());
        assert!(r.violations.iter().all(|v| v.model.space().len() <= 2));

        let d = scheme("SEL", "K_B");
        let r = scheme_soundness_report(&d, Semantics::Ed, ScenarioClass::All, &b, &pool).unwrap();
        assert!(r.is_sound());
        assert_eq!(r.instances, pool.len() * pool.len());

        let db = scheme("ELB+D_B", "D_B");
        assert!(scheme_soundness_report(&db, Semantics::Ed, ScenarioClass::Consistent, &b, &pool).unwrap().is_sound());
        let r = scheme_soundness_report(&db, Semantics::Ed, ScenarioClass::All, &b, &pool).unwrap();
        assert!(r.violations.iter().all(|v| v.scenario.v == Some(PointSet::EMPTY)));
        assert!(!r.is_sound());
    }

    #[test]
    fn report_json_shape() {
        let pool = vec![parse("p").unwrap()];
        let r = scheme_soundness_report(&scheme("SEL", "CB"), Semantics::Ed, ScenarioClass::Consistent, &Bounds::new(2), &pool).unwrap();
        let v = r.to_json();
        assert_eq!(v["scheme"], "CB");
        assert_eq!(v["semantics"], "ed");
        assert_eq!(v["class"], "consistent");
        assert_eq!(v["violations"][0]["instance"], "B ([]p | []~[]p)");
    }
}
