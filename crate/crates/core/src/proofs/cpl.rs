//! Tautological consequence with modal subformulas treated as atoms.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::Formula;

/// Largest number of distinct atoms a truth table is built for.
pub const MAX_CPL_ATOMS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{found} propositional atoms exceed the cap of {MAX_CPL_ATOMS}")]
pub struct TooManyAtoms {
    pub found: usize,
}

fn collect_atoms<'a>(f: &'a Formula, atoms: &mut BTreeMap<&'a Formula, usize>) {
    match f {
        Formula::Not(g) => collect_atoms(g, atoms),
        Formula::And(a, b) => {
            collect_atoms(a, atoms);
            collect_atoms(b, atoms);
        }
        _ => {
            let next = atoms.len();
            atoms.entry(f).or_insert(next);
        }
    }
}

fn value(f: &Formula, atoms: &BTreeMap<&Formula, usize>, row: u32) -> bool {
    match f {
        Formula::Not(g) => !value(g, atoms, row),
        Formula::And(a, b) => value(a, atoms, row) && value(b, atoms, row),
        _ => row >> atoms[f] & 1 == 1,
    }
}

/// Whether `conclusion` is true in every row of the truth table where all
/// `premises` are. Propositions and maximal `K`/`[]`/`B` subformulas are the
/// atoms; syntactically identical subformulas are the same atom.
pub fn cpl_consequence(premises: &[&Formula], conclusion: &Formula) -> Result<bool, TooManyAtoms> {
    let mut atoms = BTreeMap::new();
    for f in premises.iter().copied().chain([conclusion]) {
        collect_atoms(f, &mut atoms);
    }
    if atoms.len() > MAX_CPL_ATOMS {
        return Err(TooManyAtoms { found: atoms.len() });
    }
    Ok((0u32..1 << atoms.len())
        .filter(|&row| premises.iter().all(|p| value(p, &atoms, row)))
        .all(|row| value(conclusion, &atoms, row)))
}
