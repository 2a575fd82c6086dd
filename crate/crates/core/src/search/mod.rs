//! Bounded search over all small topological subset models.
//!
//! Models are enumerated by number of points, then by topology in canonical
//! order, then by valuation. A verdict of `valid_up_to_bound` says only that
//! no countermodel exists within the bound.

mod pool;
mod soundness;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::io::{ModelSpec, ScenarioSpec};
use crate::models::{Scenario, ScenarioClass, Semantics, SubsetModel};
use crate::set::PointSet;
use crate::syntax::{Formula, Tree};
use crate::topology::{enumerate_topologies, TopoSpace, TopologyError};

pub use pool::{formulas_up_to, random_formula, PoolSpec, POOL_SEED};
pub use soundness::{scheme_soundness_report, SoundnessReport, Violation};

pub const MAX_SEARCH_POINTS: usize = 4;
pub const DEFAULT_MAX_POINTS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("bound exceeded: {what} is {requested}, allowed at most {max}")]
    BoundExceeded { what: &'static str, requested: usize, max: usize },
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuationMode {
    Exhaustive,
    /// `count` valuations per topology from a seeded generator.
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_points: usize,
    pub props: Vec<String>,
    pub valuation_mode: ValuationMode,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
}

impl Bounds {
    pub fn new(max_points: usize) -> Self {
        Bounds { max_points, props: Vec::new(), valuation_mode: ValuationMode::Exhaustive, jobs: 1 }
    }

    pub fn with_props<I: IntoIterator<Item = S>, S: Into<String>>(mut self, props: I) -> Self {
        self.props = props.into_iter().map(Into::into).collect();
        self
    }

    pub fn sampled(mut self, count: usize, seed: u64) -> Self {
        self.valuation_mode = ValuationMode::Sampled { count, seed };
        self
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    /// These bounds with the propositions of `formulas` added.
    pub fn covering<'a>(&self, formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut props: BTreeSet<String> = self.props.iter().cloned().collect();
        for f in formulas {
            props.extend(f.props());
        }
        Bounds { props: props.into_iter().collect(), ..self.clone() }
    }

    /// Largest number of propositions enumerated exhaustively at `n` points.
    pub fn max_exhaustive_props(n: usize) -> usize {
        if n >= 4 {
            2
        } else {
            4
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if !(1..=MAX_SEARCH_POINTS).contains(&self.max_points) {
            return Err(SearchError::BoundExceeded { what: "max_points", requested: self.max_points, max: MAX_SEARCH_POINTS });
        }
        let props: BTreeSet<&String> = self.props.iter().collect();
        let cap = Bounds::max_exhaustive_props(self.max_points);
        if self.valuation_mode == ValuationMode::Exhaustive && props.len() > cap {
            return Err(SearchError::BoundExceeded { what: "propositions under exhaustive valuation", requested: props.len(), max: cap });
        }
        Ok(())
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(DEFAULT_MAX_POINTS)
    }
}

/// The models within a bound, addressable by position in enumeration order.
#[derive(Clone, Debug)]
pub struct ModelEnumeration {
    props: Vec<String>,
    spaces: Vec<TopoSpace>,
    /// Valuations for each space, one set per proposition.
    valuations: Vec<Arc<Vec<Vec<PointSet>>>>,
    /// `starts[i]` is the index of the first model on `spaces[i]`.
    starts: Vec<usize>,
    len: usize,
}

impl ModelEnumeration {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    /// The `i`-th model.
    pub fn model(&self, i: usize) -> SubsetModel {
        let s = self.starts.partition_point(|&start| start <= i) - 1;
        let sets = &self.valuations[s][i - self.starts[s]];
        let valuation: BTreeMap<String, PointSet> = self.props.iter().cloned().zip(sets.iter().copied()).collect();
        SubsetModel::new(self.spaces[s].clone(), valuation).expect("valuation within space")
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetModel> + '_ {
        (0..self.len).map(|i| self.model(i))
    }

    /// Runs `f` on models in order and returns the first hit; with more than
    /// one job the models are shared among workers but the hit returned is
    /// still the one with the smallest index.
    pub(crate) fn find_first<T: Send>(&self, jobs: usize, f: impl Fn(usize, &SubsetModel) -> Option<T> + Sync) -> Option<T> {
        if jobs <= 1 {
            return (0..self.len).find_map(|i| f(i, &self.model(i)));
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
        pool.install(|| (0..self.len).into_par_iter().find_map_first(|i| f(i, &self.model(i))))
    }

    /// Maps `f` over all models, returning results in model order.
    pub(crate) fn map_all<T: Send>(&self, jobs: usize, f: impl Fn(usize, &SubsetModel) -> T + Sync) -> Vec<T> {
        if jobs <= 1 {
            return (0..self.len).map(|i| f(i, &self.model(i))).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
        pool.install(|| (0..self.len).into_par_iter().map(|i| f(i, &self.model(i))).collect())
    }
}

fn exhaustive_valuations(n: usize, props: usize) -> Vec<Vec<PointSet>> {
    let row = (1u64 << n) - 1;
    (0u64..1 << (n * props))
        .map(|code| (0..props).map(|k| PointSet::from_bits(code >> (k * n) & row)).collect())
        .collect()
}

/// Every model within `bounds`: for each size up to `max_points`, each
/// topology, each valuation of `bounds.props`.
pub fn enumerate_models(bounds: &Bounds) -> Result<ModelEnumeration, SearchError> {
    bounds.validate()?;
    let props: Vec<String> = bounds.props.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut rng = match bounds.valuation_mode {
        ValuationMode::Sampled { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        ValuationMode::Exhaustive => None,
    };
    let (mut spaces, mut valuations, mut starts, mut len) = (Vec::new(), Vec::new(), Vec::new(), 0);
    for n in 1..=bounds.max_points {
        let exhaustive = Arc::new(match bounds.valuation_mode {
            ValuationMode::Exhaustive => exhaustive_valuations(n, props.len()),
            ValuationMode::Sampled { .. } => Vec::new(),
        });
        for space in enumerate_topologies(n)? {
            let vals = match (bounds.valuation_mode, rng.as_mut()) {
                (ValuationMode::Sampled { count, .. }, Some(rng)) => {
                    let row = space.whole().bits();
                    Arc::new((0..count).map(|_| props.iter().map(|_| PointSet::from_bits(rng.gen::<u64>() & row)).collect()).collect())
                }
                _ => exhaustive.clone(),
            };
            starts.push(len);
            len += vals.len();
            spaces.push(space);
            valuations.push(vals);
        }
    }
    Ok(ModelEnumeration { props, spaces, valuations, starts, len })
}

/// A model, a scenario in it, and the semantics they were checked under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Position of the model in the enumeration.
    pub model_index: usize,
    pub model: SubsetModel,
    pub scenario: Scenario,
    pub semantics: Semantics,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "model": ModelSpec::of(&self.model),
            "scenario": ScenarioSpec::of(&self.scenario, self.model.space()),
            "semantics": self.semantics,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    ValidUpToBound { models: usize },
    Countermodel(Witness),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::ValidUpToBound { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Countermodel(w) => Some(w),
            Verdict::ValidUpToBound { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::ValidUpToBound { models } => json!({"status": "valid_up_to_bound", "models": models}),
            Verdict::Countermodel(w) => {
                let mut v = w.to_json();
                v["status"] = json!("countermodel");
                v
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Satisfiability {
    Satisfiable(Witness),
    UnsatisfiableUpToBound { models: usize },
}

impl Satisfiability {
    pub fn to_json(&self) -> Value {
        match self {
            Satisfiability::UnsatisfiableUpToBound { models } => {
                json!({"status": "unsatisfiable_up_to_bound", "models": models})
            }
            Satisfiability::Satisfiable(w) => {
                let mut v = w.to_json();
                v["status"] = json!("satisfiable");
                v
            }
        }
    }
}

/// Checks `f` at every scenario of class `cls` in every model within
/// `bounds`, which are widened to cover the propositions of `f`. The first
/// countermodel in enumeration order is returned, with its lexicographically
/// first failing scenario.
pub fn decide_bounded_validity(f: &Formula, sem: Semantics, cls: ScenarioClass, bounds: &Bounds) -> Result<Verdict, SearchError> {
    let models = enumerate_models(&bounds.covering([f]))?;
    let hit = models.find_first(bounds.jobs, |i, m| {
        let witness = m.valid_in_model(f, sem, cls).witness?;
        Some(Witness { model_index: i, model: m.clone(), scenario: witness, semantics: sem })
    });
    Ok(match hit {
        Some(w) => Verdict::Countermodel(w),
        None => Verdict::ValidUpToBound { models: models.len() },
    })
}

/// Looks for a scenario where `f` holds; the first one found is the first
/// countermodel to `~f`.
pub fn decide_bounded_satisfiability(f: &Formula, sem: Semantics, cls: ScenarioClass, bounds: &Bounds) -> Result<Satisfiability, SearchError> {
    Ok(match decide_bounded_validity(&f.clone().not(), sem, cls, bounds)? {
        Verdict::Countermodel(w) => Satisfiability::Satisfiable(w),
        Verdict::ValidUpToBound { models } => Satisfiability::UnsatisfiableUpToBound { models },
    })
}

/// Summary of an enumeration, for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationSummary {
    pub models: usize,
    pub topologies: usize,
    pub props: Vec<String>,
}

impl ModelEnumeration {
    pub fn summary(&self) -> EnumerationSummary {
        EnumerationSummary { models: self.len, topologies: self.spaces.len(), props: self.props.clone() }
    }
}
