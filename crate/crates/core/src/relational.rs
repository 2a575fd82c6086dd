//! Relational (Kripke) models for the pure belief language, their brush
//! structure, and the transfer to Alexandroff topological models.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::models::{ModelError, Scenario, Semantics, SubsetModel};
use crate::set::PointSet;
use crate::syntax::Formula;
use crate::topology::{alexandroff_from_successors, canonical_points, default_labels, transitivity_witness, TopoSpace, TopologyError};

/// Largest `n` accepted by [`enumerate_belief_frames`].
pub const MAX_FRAME_POINTS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RelationalError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("not a belief frame: {property} fails at {witness:?}")]
    NotBeliefFrame { property: &'static str, witness: Vec<String> },
    #[error("formula {0} uses K or [] and has no relational reading")]
    FormulaOutsideLB(String),
    #[error("bound exceeded: {requested} points, allowed 1..={max}")]
    BoundExceeded { requested: usize, max: usize },
}

/// A finite set of points with a binary relation, stored as successor sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    points: Vec<String>,
    succ: Vec<PointSet>,
}

/// Results of the three belief-frame conditions, with the first
/// counterexample to each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameCheck {
    pub serial: bool,
    pub transitive: bool,
    pub euclidean: bool,
    pub serial_witness: Option<String>,
    pub transitive_witness: Option<[String; 3]>,
    pub euclidean_witness: Option<[String; 3]>,
}

impl FrameCheck {
    pub fn is_belief_frame(&self) -> bool {
        self.serial && self.transitive && self.euclidean
    }
}

/// One brush: a carrier `[x]` whose points all see exactly the final cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Brush {
    pub carrier: PointSet,
    pub final_cluster: PointSet,
    pub is_pin: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrushDecomposition {
    /// Ordered by smallest member.
    pub components: Vec<Brush>,
}

impl BrushDecomposition {
    /// The component containing `x`.
    pub fn component_of(&self, x: usize) -> Option<&Brush> {
        self.components.iter().find(|c| c.carrier.contains(x))
    }
}

impl Frame {
    pub fn new<S: AsRef<str>>(points: &[S], pairs: &[(S, S)]) -> Result<Self, RelationalError> {
        let (points, index) = canonical_points(points)?;
        let mut succ = vec![PointSet::EMPTY; points.len()];
        for (a, b) in pairs {
            let look = |n: &S| index.get(n.as_ref()).copied().ok_or_else(|| RelationalError::UnknownPoint(n.as_ref().to_string()));
            succ[look(a)?].insert(look(b)?);
        }
        Ok(Frame { points, succ })
    }

    /// `points` must be sorted and `succ[i]` within range.
    pub fn from_successors(points: Vec<String>, succ: Vec<PointSet>) -> Self {
        debug_assert_eq!(points.len(), succ.len());
        Frame { points, succ }
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn successors(&self, x: usize) -> PointSet {
        self.succ[x]
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.succ[x].contains(y)
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(x, s)| s.iter().map(move |y| (self.points[x].clone(), self.points[y].clone())))
            .collect()
    }

    pub fn check_belief_frame(&self) -> FrameCheck {
        let name = |i: usize| self.points[i].clone();
        let serial_witness = (0..self.len()).find(|&x| self.succ[x].is_empty()).map(name);
        let transitive_witness = transitivity_witness(&self.succ).map(|(x, y, z)| [name(x), name(y), name(z)]);
        let euclidean_witness = self.euclidean_witness().map(|(x, y, z)| [name(x), name(y), name(z)]);
        FrameCheck {
            serial: serial_witness.is_none(),
            transitive: transitive_witness.is_none(),
            euclidean: euclidean_witness.is_none(),
            serial_witness,
            transitive_witness,
            euclidean_witness,
        }
    }

    /// First `(x, y, z)` with `xRy`, `xRz` and not `yRz`.
    fn euclidean_witness(&self) -> Option<(usize, usize, usize)> {
        for (x, &sx) in self.succ.iter().enumerate() {
            for y in sx.iter() {
                if let Some(z) = (sx - self.succ[y]).first() {
                    return Some((x, y, z));
                }
            }
        }
        None
    }

    fn require_belief_frame(&self) -> Result<(), RelationalError> {
        let check = self.check_belief_frame();
        let fail = |property, witness: Vec<String>| Err(RelationalError::NotBeliefFrame { property, witness });
        if let Some(w) = check.serial_witness {
            return fail("serial", vec![w]);
        }
        if let Some(w) = check.transitive_witness {
            return fail("transitive", w.to_vec());
        }
        if let Some(w) = check.euclidean_witness {
            return fail("euclidean", w.to_vec());
        }
        Ok(())
    }

    /// Splits a belief frame into brushes. Points `x` and `y` share a
    /// component when some `z` is a successor of both; the final cluster of
    /// a component is its set of reflexive points.
    pub fn brush_decompose(&self) -> Result<BrushDecomposition, RelationalError> {
        self.require_belief_frame()?;
        let mut assigned = PointSet::EMPTY;
        let mut components = Vec::new();
        for x in 0..self.len() {
            if assigned.contains(x) {
                continue;
            }
            let carrier = PointSet::from_indices((0..self.len()).filter(|&y| !(self.succ[x] & self.succ[y]).is_empty()));
            let final_cluster = PointSet::from_indices(carrier.iter().filter(|&y| self.related(y, y)));
            assigned = assigned | carrier;
            components.push(Brush { carrier, final_cluster, is_pin: (carrier - final_cluster).len() == 1 });
        }
        Ok(BrushDecomposition { components })
    }

    /// The Alexandroff space of the reflexive closure.
    pub fn alexandroff(&self) -> Result<TopoSpace, RelationalError> {
        Ok(alexandroff_from_successors(self.points.clone(), &self.succ)?)
    }
}

/// Every serial, transitive and Euclidean relation on `n` points labelled
/// `a, b, ...`, in increasing order of the relation read as a bit string.
pub fn enumerate_belief_frames(n: usize) -> Result<Vec<Frame>, RelationalError> {
    if !(1..=MAX_FRAME_POINTS).contains(&n) {
        return Err(RelationalError::BoundExceeded { requested: n, max: MAX_FRAME_POINTS });
    }
    let labels = default_labels(n);
    let row = (1u64 << n) - 1;
    let mut out = Vec::new();
    for code in 0u64..(1u64 << (n * n)) {
        let succ: Vec<PointSet> = (0..n).map(|x| PointSet::from_bits(code >> (x * n) & row)).collect();
        let frame = Frame { points: labels.clone(), succ };
        if frame.check_belief_frame().is_belief_frame() {
            out.push(frame);
        }
    }
    Ok(out)
}

/// A frame with a valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalModel {
    frame: Frame,
    valuation: BTreeMap<String, PointSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferCheck {
    pub holds: bool,
    /// First point where the relational and topological readings differ.
    pub counterexample: Option<usize>,
}

impl RelationalModel {
    pub fn new(frame: Frame, valuation: BTreeMap<String, PointSet>) -> Result<Self, RelationalError> {
        let whole = PointSet::full(frame.len());
        if let Some((p, _)) = valuation.iter().find(|(_, s)| !s.is_subset(whole)) {
            return Err(ModelError::ValuationNotSubset(p.clone()).into());
        }
        Ok(RelationalModel { frame, valuation })
    }

    pub fn with_named_valuation(frame: Frame, valuation: &BTreeMap<String, Vec<String>>) -> Result<Self, RelationalError> {
        let mut masks = BTreeMap::new();
        for (p, names) in valuation {
            let mut set = PointSet::EMPTY;
            for n in names {
                let i = frame.points.binary_search(n).map_err(|_| RelationalError::UnknownPoint(n.clone()))?;
                set.insert(i);
            }
            masks.insert(p.clone(), set);
        }
        RelationalModel::new(frame, masks)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<String, PointSet> {
        &self.valuation
    }

    /// The topological model on the Alexandroff space of the relation, with
    /// the same valuation.
    pub fn to_topological(&self) -> Result<SubsetModel, RelationalError> {
        Ok(SubsetModel::new(self.frame.alexandroff()?, self.valuation.clone())?)
    }

    /// Points where `f` holds under the relational reading of `B`.
    pub fn truth_set(&self, f: &Formula) -> Result<PointSet, RelationalError> {
        if !f.is_belief_only() {
            return Err(RelationalError::FormulaOutsideLB(f.render()));
        }
        Ok(self.truth(f))
    }

    fn truth(&self, f: &Formula) -> PointSet {
        let whole = PointSet::full(self.frame.len());
        match f {
            Formula::Prop(p) => self.valuation.get(p).copied().unwrap_or_default(),
            Formula::Not(g) => whole - self.truth(g),
            Formula::And(a, b) => self.truth(a) & self.truth(b),
            Formula::Bel(g) => {
                let t = self.truth(g);
                PointSet::from_indices((0..self.frame.len()).filter(|&x| self.frame.succ[x].is_subset(t)))
            }
            Formula::Know(_) | Formula::Box(_) => unreachable!("checked by truth_set"),
        }
    }

    pub fn eval_rel(&self, x: usize, f: &Formula) -> Result<bool, RelationalError> {
        Ok(self.truth_set(f)?.contains(x))
    }

    /// Compares the relational truth of `f` at each point `x` with its strong
    /// topological truth at `(x, [x])` in the Alexandroff model.
    pub fn check_transfer(&self, f: &Formula) -> Result<TransferCheck, RelationalError> {
        let relational = self.truth_set(f)?;
        let brushes = self.frame.brush_decompose()?;
        let topo = self.to_topological()?;
        let counterexample = (0..self.frame.len()).find(|&x| {
            let carrier = brushes.component_of(x).expect("components cover the frame").carrier;
            let s = Scenario::epistemic(x, carrier);
            let topological = topo.eval(&s, f, Semantics::Strong).expect("[x] is open and contains x");
            topological != relational.contains(x)
        });
        Ok(TransferCheck { holds: counterexample.is_none(), counterexample })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn frame(points: &[&str], pairs: &[(&str, &str)]) -> Frame {
        Frame::new(points, pairs).unwrap()
    }

    fn pin() -> Frame {
        frame(&["x", "y"], &[("x", "y"), ("y", "y")])
    }

    fn with_p(f: Frame, p: &[&str]) -> RelationalModel {
        let val = BTreeMap::from([("p".to_string(), p.iter().map(|s| s.to_string()).collect())]);
        RelationalModel::with_named_valuation(f, &val).unwrap()
    }

    #[test]
    fn belief_frame_checks() {
        assert!(pin().check_belief_frame().is_belief_frame());

        let c = frame(&["x", "y"], &[("x", "y"), ("y", "x")]).check_belief_frame();
        assert!(!c.euclidean);
        assert_eq!(c.euclidean_witness, Some(["x".into(), "y".into(), "y".into()]));
        assert_eq!(c.transitive_witness, Some(["x".into(), "y".into(), "x".into()]));

        let c = frame(&["x"], &[]).check_belief_frame();
        assert!(!c.serial);
        assert_eq!(c.serial_witness.as_deref(), Some("x"));
    }

    #[test]
    fn decompositions() {
        let d = pin().brush_decompose().unwrap();
        assert_eq!(d.components, vec![Brush { carrier: PointSet::full(2), final_cluster: PointSet::singleton(1), is_pin: true }]);

        let d = frame(&["x", "y", "u"], &[("x", "y"), ("y", "y"), ("u", "u")]).brush_decompose().unwrap();
        // Sorted points: u, x, y.
        assert_eq!(
            d.components,
            vec![
                Brush { carrier: PointSet::singleton(0), final_cluster: PointSet::singleton(0), is_pin: false },
                Brush { carrier: PointSet::from_indices([1, 2]), final_cluster: PointSet::singleton(2), is_pin: true },
            ]
        );

        let full = frame(&["x", "y"], &[("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]);
        let d = full.brush_decompose().unwrap();
        assert_eq!(d.components, vec![Brush { carrier: PointSet::full(2), final_cluster: PointSet::full(2), is_pin: false }]);

        let err = frame(&["x"], &[]).brush_decompose().unwrap_err();
        assert!(matches!(err, RelationalError::NotBeliefFrame { property: "serial", .. }));
    }

    #[test]
    fn transfer_to_topology() {
        let m = with_p(pin(), &["y"]).to_topological().unwrap();
        assert_eq!(m.space().opens(), &[PointSet::EMPTY, PointSet::full(2), PointSet::singleton(1)]);
        assert_eq!(m.value_of("p"), PointSet::singleton(1));

        let id = with_p(frame(&["a", "b"], &[("a", "a"), ("b", "b")]), &[]).to_topological().unwrap();
        assert_eq!(id.space().opens().len(), 4);

        let pts = ["x", "y", "z"];
        let all: Vec<(&str, &str)> = pts.iter().flat_map(|a| pts.iter().map(move |b| (*a, *b))).collect();
        let full = with_p(frame(&pts, &all), &[]).to_topological().unwrap();
        assert_eq!(full.space().opens(), &[PointSet::EMPTY, PointSet::full(3)]);

        let err = with_p(frame(&["x", "y"], &[("x", "y"), ("y", "x")]), &[]).to_topological().unwrap_err();
        assert!(matches!(err, RelationalError::Topology(TopologyError::NotTransitive(..))));
    }

    #[test]
    fn relational_truth() {
        let m = with_p(pin(), &["y"]);
        assert!(m.eval_rel(0, &parse("B p").unwrap()).unwrap());
        assert!(!m.eval_rel(0, &parse("p").unwrap()).unwrap());
        assert!(m.eval_rel(0, &parse("B B p").unwrap()).unwrap());
        assert!(matches!(m.eval_rel(0, &parse("K p").unwrap()), Err(RelationalError::FormulaOutsideLB(_))));
        assert!(matches!(m.eval_rel(0, &parse("B []p").unwrap()), Err(RelationalError::FormulaOutsideLB(_))));
    }

    #[test]
    fn transfer_examples() {
        let m = with_p(pin(), &["y"]);
        for f in ["B p", "p"] {
            assert!(m.check_transfer(&parse(f).unwrap()).unwrap().holds, "{f}");
        }
        let two = with_p(frame(&["x", "y", "u"], &[("x", "y"), ("y", "y"), ("u", "u")]), &["y"]);
        assert!(two.check_transfer(&parse("B ~p").unwrap()).unwrap().holds);
    }

    #[test]
    fn frame_counts() {
        assert_eq!(enumerate_belief_frames(1).unwrap().len(), 1);
        assert_eq!(enumerate_belief_frames(2).unwrap().len(), 4);
        assert!(enumerate_belief_frames(0).is_err());
        assert!(enumerate_belief_frames(5).is_err());
    }
}
