//! Generated instance pools for axiom schemes.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Formula, Modality, Tree};

/// Seed of the standard pools.
pub const POOL_SEED: u64 = 0x7e1_5eed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoolSpec {
    pub props: Vec<String>,
    pub modalities: Vec<Modality>,
    /// Every formula of at most this tree height is included.
    pub exhaustive_height: Option<usize>,
    /// Number of further random formulas, all distinct from each other and
    /// from the exhaustive part.
    pub random: usize,
    /// Tree heights of the random formulas, drawn uniformly.
    pub random_heights: (usize, usize),
    pub seed: u64,
}

impl PoolSpec {
    /// Everything over `p, q` up to height 2, plus 200 random height-3
    /// formulas.
    pub fn standard() -> Self {
        PoolSpec {
            props: vec!["p".into(), "q".into()],
            modalities: vec![Modality::Know, Modality::Box, Modality::Bel],
            exhaustive_height: Some(2),
            random: 200,
            random_heights: (3, 3),
            seed: POOL_SEED,
        }
    }

    /// 100 random belief-only formulas over `p` of height 1 to 3.
    pub fn belief_only() -> Self {
        PoolSpec {
            props: vec!["p".into()],
            modalities: vec![Modality::Bel],
            exhaustive_height: None,
            random: 100,
            random_heights: (1, 3),
            seed: POOL_SEED,
        }
    }

    pub fn generate(&self) -> Vec<Formula> {
        let mut out = match self.exhaustive_height {
            Some(h) => formulas_up_to(&self.props, &self.modalities, h),
            None => Vec::new(),
        };
        let mut seen: HashSet<Formula> = out.iter().cloned().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (lo, hi) = self.random_heights;
        let target = out.len() + self.random;
        // Bounded so that an unsatisfiable request terminates.
        for _ in 0..self.random.saturating_mul(1000) {
            if out.len() == target {
                break;
            }
            let h = rng.gen_range(lo..=hi);
            let f = random_formula(&mut rng, &self.props, &self.modalities, h);
            if seen.insert(f.clone()) {
                out.push(f);
            }
        }
        out
    }
}
/// All formulas of tree height at most `h`, lower heights first.
pub fn formulas_up_to(props: &[String], modalities: &[Modality], h: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = props.iter().map(|p| Formula::p(p)).collect();
    for _ in 0..h {
        let prev = all.clone();
        let mut seen: HashSet<Formula> = all.iter().cloned().collect();
        let mut push = |f: Formula, all: &mut Vec<Formula>| {
            if seen.insert(f.clone()) {
                all.push(f);
            }
        };
        for f in &prev {
            push(f.clone().not(), &mut all);
            for &m in modalities {
                push(Formula::modal(m, f.clone()), &mut all);
            }
        }
        for a in &prev {
            for b in &prev {
                push(a.clone().and(b.clone()), &mut all);
            }
        }
    }
    all
}

/// A random formula of tree height exactly `h`.
pub fn random_formula<R: Rng>(rng: &mut R, props: &[String], modalities: &[Modality], h: usize) -> Formula {
    if h == 0 {
        return Formula::p(props.choose(rng).expect("at least one proposition"));
    }
    let choice = rng.gen_range(0..modalities.len() + 2);
    if choice == 0 {
        return random_formula(rng, props, modalities, h - 1).not();
    }
    if choice <= modalities.len() {
        return Formula::modal(modalities[choice - 1], random_formula(rng, props, modalities, h - 1));
    }
    let tall = random_formula(rng, props, modalities, h - 1);
    let other_h = rng.gen_range(0..h);
    let other = random_formula(rng, props, modalities, other_h);
    if rng.gen_bool(0.5) {
        tall.and(other)
    } else {
        other.and(tall)
    }
}
