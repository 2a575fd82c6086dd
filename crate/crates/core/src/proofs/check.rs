//! Line-by-line proof checking.

use thiserror::Error;

use super::cpl::{cpl_consequence, TooManyAtoms};
use super::logic::Logic;
use crate::syntax::{Formula, Modality, Tree};

/// How a line was obtained. Line indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom(String),
    /// From line `i` holding `a` and line `j` holding `a -> b`, infer `b`.
    Mp(usize, usize),
    Nec(Modality, usize),
    Cpl(Vec<usize>),
    Premise,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

impl ProofLine {
    pub fn new(formula: Formula, justification: Justification) -> Self {
        ProofLine { formula, justification }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn new(lines: Vec<ProofLine>) -> Self {
        Proof { lines }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

/// Whether premise lines are accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Theorem,
    Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofErrorKind {
    #[error("reference to line {0}, which is not an earlier line")]
    BadIndex(usize),
    #[error("not an instance of axiom {0}")]
    NotAnAxiom(String),
    #[error("modus ponens premises do not fit")]
    MpMismatch,
    #[error("necessitation for {0} is unavailable here")]
    NecNotAvailable(Modality),
    #[error("necessitation does not produce this formula")]
    NecMismatch,
    #[error("not a propositional consequence of the cited lines")]
    CplFails,
    #[error(transparent)]
    TooManyAtoms(#[from] TooManyAtoms),
    #[error("premises are only allowed in derivation mode")]
    PremiseNotAllowed,
    #[error("empty proof")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ProofError {
    pub line: usize,
    pub kind: ProofErrorKind,
}

/// Checks a proof with no premises.
pub fn check_proof(logic: &Logic, proof: &Proof) -> Result<(), ProofError> {
    check_proof_in(logic, proof, Mode::Theorem)
}

pub fn check_proof_in(logic: &Logic, proof: &Proof, mode: Mode) -> Result<(), ProofError> {
    if proof.is_empty() {
        return Err(ProofError { line: 0, kind: ProofErrorKind::Empty });
    }
    // depends_on_premise[i] for 0-based line i.
    let mut depends_on_premise: Vec<bool> = Vec::with_capacity(proof.len());
    for (k, line) in proof.lines.iter().enumerate() {
        let number = k + 1;
        let fail = |kind| ProofError { line: number, kind };
        let earlier = |i: usize| {
            if (1..number).contains(&i) {
                Ok(&proof.lines[i - 1].formula)
            } else {
                Err(fail(ProofErrorKind::BadIndex(i)))
            }
        };
        let f = &line.formula;
        let tainted = match &line.justification {
            Justification::Axiom(name) => {
                let instance = logic.scheme(name).is_some_and(|s| s.match_formula(f).is_some());
                if !instance {
                    return Err(fail(ProofErrorKind::NotAnAxiom(name.clone())));
                }
                false
            }
            Justification::Mp(i, j) => {
                let (a, imp) = (earlier(*i)?, earlier(*j)?);
                if imp.as_implication() != Some((a, f)) {
                    return Err(fail(ProofErrorKind::MpMismatch));
                }
                depends_on_premise[i - 1] || depends_on_premise[j - 1]
            }
            Justification::Nec(m, i) => {
                let g = earlier(*i)?;
                if !logic.nec_modalities().contains(m) || depends_on_premise[i - 1] {
                    return Err(fail(ProofErrorKind::NecNotAvailable(*m)));
                }
                if *f != Formula::modal(*m, g.clone()) {
                    return Err(fail(ProofErrorKind::NecMismatch));
                }
                false
            }
            Justification::Cpl(ids) => {
                let premises = ids.iter().map(|&i| earlier(i)).collect::<Result<Vec<_>, _>>()?;
                if !cpl_consequence(&premises, f).map_err(|e| fail(e.into()))? {
                    return Err(fail(ProofErrorKind::CplFails));
                }
                ids.iter().any(|&i| depends_on_premise[i - 1])
            }
            Justification::Premise => {
                if mode != Mode::Derivation {
                    return Err(fail(ProofErrorKind::PremiseNotAllowed));
                }
                true
            }
        };
        depends_on_premise.push(tainted);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::builtin_logics;
    use crate::syntax::parse;

    fn line(f: &str, j: Justification) -> ProofLine {
        ProofLine::new(parse(f).unwrap(), j)
    }

    fn axiom(n: &str) -> Justification {
        Justification::Axiom(n.to_string())
    }

    #[test]
    fn single_axiom_lines() {
        let r = builtin_logics();
        let ok = Proof::new(vec![line("K p -> p", axiom("T_K"))]);
        assert_eq!(check_proof(r.get("S5_K").unwrap(), &ok), Ok(()));
        let bad = Proof::new(vec![line("~[]p -> []~[]p", axiom("5_box"))]);
        let err = check_proof(r.get("S4_box").unwrap(), &bad).unwrap_err();
        assert_eq!(err, ProofError { line: 1, kind: ProofErrorKind::NotAnAxiom("5_box".into()) });
    }

    #[test]
    fn rules() {
        let r = builtin_logics();
        let s5 = r.get("S5_K").unwrap();
        let proof = Proof::new(vec![
            line("p | ~p", Justification::Cpl(vec![])),
            line("K(p | ~p)", Justification::Nec(Modality::Know, 1)),
            line("K(p | ~p) -> (p | ~p)", axiom("T_K")),
            line("p | ~p", Justification::Mp(2, 3)),
        ]);
        assert_eq!(check_proof(s5, &proof), Ok(()));

        let mut swapped = proof.clone();
        swapped.lines[3].justification = Justification::Mp(3, 2);
        assert_eq!(check_proof(s5, &swapped).unwrap_err().kind, ProofErrorKind::MpMismatch);

        let mut forward = proof.clone();
        forward.lines[1].justification = Justification::Nec(Modality::Know, 2);
        assert_eq!(check_proof(s5, &forward).unwrap_err().kind, ProofErrorKind::BadIndex(2));

        let mut other = proof.clone();
        other.lines[1] = line("[](p | ~p)", Justification::Nec(Modality::Box, 1));
        assert_eq!(check_proof(s5, &other).unwrap_err().kind, ProofErrorKind::NecNotAvailable(Modality::Box));
    }

    #[test]
    fn premises() {
        let r = builtin_logics();
        let s5 = r.get("S5_K").unwrap();
        let proof = Proof::new(vec![line("p", Justification::Premise), line("K p", Justification::Nec(Modality::Know, 1))]);
        assert_eq!(check_proof(s5, &proof).unwrap_err().kind, ProofErrorKind::PremiseNotAllowed);
        let err = check_proof_in(s5, &proof, Mode::Derivation).unwrap_err();
        assert_eq!(err, ProofError { line: 2, kind: ProofErrorKind::NecNotAvailable(Modality::Know) });

        let mp = Proof::new(vec![
            line("p", Justification::Premise),
            line("p -> q", Justification::Premise),
            line("q", Justification::Mp(1, 2)),
        ]);
        assert_eq!(check_proof_in(s5, &mp, Mode::Derivation), Ok(()));
    }
}
