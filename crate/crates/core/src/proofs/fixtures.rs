//! Builders for the shipped proofs, parameterised by the formula they are
//! about. The `.prf` files under `fixtures/proofs` are these builders at `p`.

use super::check::{Justification as J, Proof, ProofLine};
use crate::syntax::{Formula, Modality, Tree};

/// A shipped proof: its file stem, the logic it checks in, and its builder.
#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub logic: &'static str,
    /// The single-modality scheme its conclusion instantiates, if any.
    pub establishes: Option<&'static str>,
    pub build: fn(&Formula) -> Proof,
}

pub fn builtin_fixtures() -> Vec<Fixture> {
    vec![
        Fixture { name: "strong_belief", logic: "SEL", establishes: None, build: strong_belief },
        Fixture { name: "belief_k", logic: "SEL", establishes: Some("K_B"), build: belief_k },
        Fixture { name: "belief_d", logic: "SEL", establishes: Some("D_B"), build: belief_d },
        Fixture { name: "belief_4", logic: "SEL", establishes: Some("4_B"), build: belief_4 },
        Fixture { name: "belief_5", logic: "SEL", establishes: Some("5_B"), build: belief_5 },
        Fixture { name: "belief_nec", logic: "SEL", establishes: None, build: belief_nec },
    ]
}

struct Builder {
    lines: Vec<ProofLine>,
}

impl Builder {
    fn new() -> Self {
        Builder { lines: Vec::new() }
    }

    /// Appends a line and returns its 1-based number.
    fn add(&mut self, f: Formula, j: J) -> usize {
        self.lines.push(ProofLine::new(f, j));
        self.lines.len()
    }

    fn axiom(&mut self, f: Formula, name: &str) -> usize {
        self.add(f, J::Axiom(name.to_string()))
    }

    fn formula(&self, i: usize) -> Formula {
        self.lines[i - 1].formula.clone()
    }

    /// From line `i` holding `a -> b`, derives `M a -> M b` with `M` in
    /// {`K`, `B`}; belief goes through knowledge.
    fn distribute(&mut self, m: Modality, i: usize) -> usize {
        let (a, b) = {
            let f = &self.lines[i - 1].formula;
            let (a, b) = f.as_implication().expect("implication");
            (a.clone(), b.clone())
        };
        let imp = self.formula(i);
        let k = self.add(imp.clone().know(), J::Nec(Modality::Know, i));
        let lifted = match m {
            Modality::Know => k,
            Modality::Bel => {
                let kb = self.axiom(imp.clone().know().implies(imp.clone().bel()), "KB");
                self.add(imp.clone().bel(), J::Mp(k, kb))
            }
            Modality::Box => unreachable!("not used"),
        };
        let (scheme, dist) = match m {
            Modality::Know => ("K_K", imp.clone().know().implies(a.clone().know().implies(b.clone().know()))),
            _ => ("K_B", imp.clone().bel().implies(a.clone().bel().implies(b.clone().bel()))),
        };
        let d = self.axiom(dist, scheme);
        self.add(Formula::modal(m, a).implies(Formula::modal(m, b)), J::Mp(lifted, d))
    }

    fn finish(self) -> Proof {
        Proof::new(self.lines)
    }
}

/// `<>[]f`.
fn dia_box(f: &Formula) -> Formula {
    f.clone().boxed().dia()
}

fn strong_belief_lines(b: &mut Builder, phi: &Formula) -> usize {
    let bp = phi.clone().bel();
    let kdb = dia_box(phi).know();

    let rb = b.axiom(bp.clone().implies(phi.clone().boxed().bel()), "RB");
    let wf = b.axiom(phi.clone().boxed().bel().implies(dia_box(phi)), "wF");
    let to_dia = b.add(bp.clone().implies(dia_box(phi)), J::Cpl(vec![rb, wf]));
    let nec = b.add(b.formula(to_dia).know(), J::Nec(Modality::Know, to_dia));
    let dist = b.axiom(b.formula(to_dia).know().implies(bp.clone().know().implies(kdb.clone())), "K_K");
    let kk = b.add(bp.clone().know().implies(kdb.clone()), J::Mp(nec, dist));
    let spi = b.axiom(bp.clone().implies(bp.clone().know()), "sPI");
    let forward = b.add(bp.clone().implies(kdb.clone()), J::Cpl(vec![kk, spi]));

    let confident = phi.clone().boxed().or(phi.clone().boxed().not().boxed());
    let cb = b.axiom(confident.clone().bel(), "CB");
    let t = b.axiom(phi.clone().boxed().implies(phi.clone()), "T_box");
    let guard = dia_box(phi).implies(phi.clone());
    let bridge = b.add(confident.clone().implies(guard.clone()), J::Cpl(vec![t]));
    let believed = b.distribute(Modality::Bel, bridge);
    let guarded = b.add(guard.clone().bel(), J::Mp(cb, believed));
    let dist = b.axiom(guard.clone().bel().implies(dia_box(phi).bel().implies(bp.clone())), "K_B");
    let back = b.add(dia_box(phi).bel().implies(bp.clone()), J::Mp(guarded, dist));
    let kb = b.axiom(kdb.clone().implies(dia_box(phi).bel()), "KB");
    let backward = b.add(kdb.clone().implies(bp.clone()), J::Cpl(vec![back, kb]));
    b.add(bp.iff(kdb), J::Cpl(vec![forward, backward]))
}

/// `B f <-> K <>[]f` in SEL.
pub fn strong_belief(phi: &Formula) -> Proof {
    let mut b = Builder::new();
    strong_belief_lines(&mut b, phi);
    b.finish()
}

/// Distribution of belief; an axiom of SEL.
pub fn belief_k(phi: &Formula) -> Proof {
    let psi = phi.clone().not();
    let mut b = Builder::new();
    b.axiom(phi.clone().implies(psi.clone()).bel().implies(phi.clone().bel().implies(psi.bel())), "K_B");
    b.finish()
}

/// `B f -> ~B ~f` in SEL.
pub fn belief_d(phi: &Formula) -> Proof {
    let bottom = Formula::bottom();
    let mut b = Builder::new();
    let top = b.add(bottom.clone().not(), J::Cpl(vec![]));
    let boxed = b.add(bottom.clone().not().boxed(), J::Nec(Modality::Box, top));
    let wf = b.axiom(bottom.clone().bel().implies(bottom.clone().dia()), "wF");
    let consistent = b.add(bottom.clone().bel().not(), J::Cpl(vec![boxed, wf]));
    let absurd = phi.clone().implies(bottom.clone());
    let taut = b.add(phi.clone().not().implies(absurd.clone()), J::Cpl(vec![]));
    let first = b.distribute(Modality::Bel, taut);
    let dist = b.axiom(absurd.bel().implies(phi.clone().bel().implies(bottom.bel())), "K_B");
    b.add(phi.clone().bel().implies(phi.clone().not().bel().not()), J::Cpl(vec![consistent, first, dist]));
    b.finish()
}

/// `B f -> B B f` in SEL.
pub fn belief_4(phi: &Formula) -> Proof {
    let bp = phi.clone().bel();
    let mut b = Builder::new();
    let spi = b.axiom(bp.clone().implies(bp.clone().know()), "sPI");
    let kb = b.axiom(bp.clone().know().implies(bp.clone().bel()), "KB");
    b.add(bp.clone().implies(bp.bel()), J::Cpl(vec![spi, kb]));
    b.finish()
}

/// `~B f -> B ~B f` in SEL, through `B f <-> K <>[]f`.
pub fn belief_5(phi: &Formula) -> Proof {
    let nbp = phi.clone().bel().not();
    let nkdb = dia_box(phi).know().not();
    let mut b = Builder::new();
    let eq = strong_belief_lines(&mut b, phi);
    let five = b.axiom(nkdb.clone().implies(nkdb.clone().know()), "5_K");
    let known = b.add(nbp.clone().implies(nkdb.clone().know()), J::Cpl(vec![eq, five]));
    let contra = b.add(nkdb.clone().implies(nbp.clone()), J::Cpl(vec![eq]));
    let lifted = b.distribute(Modality::Know, contra);
    let kb = b.axiom(nbp.clone().know().implies(nbp.clone().bel()), "KB");
    b.add(nbp.clone().implies(nbp.bel()), J::Cpl(vec![known, lifted, kb]));
    b.finish()
}

/// Appends `B t` to a proof of `t`, using necessitation for `K` and `KB`.
pub fn necessitate_belief(proof: &Proof) -> Proof {
    let t = proof.conclusion().expect("nonempty proof").clone();
    let mut b = Builder { lines: proof.lines.clone() };
    let last = b.lines.len();
    let k = b.add(t.clone().know(), J::Nec(Modality::Know, last));
    let kb = b.axiom(t.clone().know().implies(t.clone().bel()), "KB");
    b.add(t.bel(), J::Mp(k, kb));
    b.finish()
}

/// `B(f | ~f)`, by [`necessitate_belief`].
pub fn belief_nec(phi: &Formula) -> Proof {
    let taut = Proof::new(vec![ProofLine::new(phi.clone().or(phi.clone().not()), J::Cpl(vec![]))]);
    necessitate_belief(&taut)
}
