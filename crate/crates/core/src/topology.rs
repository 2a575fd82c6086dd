//! Finite topological spaces.
//!
//! Points are kept sorted by name and sets are bitmasks over that order, so
//! two spaces built from the same data compare equal and every listing comes
//! out in the same order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::set::{PointSet, MAX_POINTS};

/// Largest `n` accepted by [`enumerate_topologies`].
pub const MAX_ENUMERATION_POINTS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("a space needs at least one point")]
    EmptyPoints,
    #[error("point {0:?} listed twice")]
    DuplicatePoint(String),
    #[error("{0} points exceed the limit of {MAX_POINTS}")]
    TooManyPoints(usize),
    #[error("the empty set is not open")]
    MissingEmpty,
    #[error("the whole space is not open")]
    MissingWhole,
    #[error("intersection of {0:?} and {1:?} is not open")]
    NotClosedUnderIntersection(Vec<String>, Vec<String>),
    #[error("union of {0:?} and {1:?} is not open")]
    NotClosedUnderUnion(Vec<String>, Vec<String>),
    #[error("open set {0:?} mentions points outside the space")]
    OpenNotSubsetOfPoints(Vec<String>),
    #[error("set {0:?} mentions points outside the space")]
    SetNotSubsetOfPoints(Vec<String>),
    #[error("relation is not transitive: {0} R {1} and {1} R {2} but not {0} R {2}")]
    NotTransitive(String, String, String),
    #[error("bound exceeded: {what} = {requested}, allowed {min}..={max}")]
    BoundExceeded { what: &'static str, requested: usize, min: usize, max: usize },
}

pub type Result<T, E = TopologyError> = std::result::Result<T, E>;

/// A finite set of named points with a verified topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopoSpace {
    points: Vec<String>,
    opens: Vec<PointSet>,
    /// Smallest open set around each point.
    neighbourhoods: Vec<PointSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityFlags {
    pub dense_in_u: bool,
    pub nowhere_dense: bool,
}

/// Sorts and checks point names, returning them with a name -> index map.
pub(crate) fn canonical_points<S: AsRef<str>>(
    points: &[S],
) -> Result<(Vec<String>, BTreeMap<String, usize>)> {
    if points.is_empty() {
        return Err(TopologyError::EmptyPoints);
    }
    if points.len() > MAX_POINTS {
        return Err(TopologyError::TooManyPoints(points.len()));
    }
    let mut sorted: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(TopologyError::DuplicatePoint(w[0].clone()));
        }
    }
    let index = sorted.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    Ok((sorted, index))
}

pub(crate) fn mask_of<S: AsRef<str>>(
    index: &BTreeMap<String, usize>,
    names: &[S],
) -> Option<PointSet> {
    names.iter().map(|n| index.get(n.as_ref()).copied()).collect::<Option<Vec<_>>>().map(PointSet::from_indices)
}

fn sort_family(family: &mut Vec<PointSet>) {
    family.sort_by(|a, b| a.lex_cmp(*b));
    family.dedup();
}

impl TopoSpace {
    /// Checks that `opens` is a topology on `points`.
    pub fn validate<S: AsRef<str>, T: AsRef<str>>(points: &[S], opens: &[Vec<T>]) -> Result<Self> {
        let (points, index) = canonical_points(points)?;
        let mut masks = Vec::with_capacity(opens.len());
        for open in opens {
            let mask = mask_of(&index, open).ok_or_else(|| {
                TopologyError::OpenNotSubsetOfPoints(open.iter().map(|s| s.as_ref().to_string()).collect())
            })?;
            masks.push(mask);
        }
        Self::from_masks(points, masks)
    }

    /// Same as [`TopoSpace::validate`] for points that are already sorted and
    /// sets given as bitmasks.
    pub fn from_masks(points: Vec<String>, mut opens: Vec<PointSet>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(TopologyError::EmptyPoints);
        }
        if n > MAX_POINTS {
            return Err(TopologyError::TooManyPoints(n));
        }
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]), "points must be sorted");
        let whole = PointSet::full(n);
        if let Some(bad) = opens.iter().find(|o| !o.is_subset(whole)) {
            let names = bad.iter().map(|i| points.get(i).cloned().unwrap_or_else(|| format!("#{i}"))).collect();
            return Err(TopologyError::OpenNotSubsetOfPoints(names));
        }
        sort_family(&mut opens);
        let present: BTreeSet<u64> = opens.iter().map(|o| o.bits()).collect();
        if !present.contains(&0) {
            return Err(TopologyError::MissingEmpty);
        }
        if !present.contains(&whole.bits()) {
            return Err(TopologyError::MissingWhole);
        }
        let names = |s: PointSet| s.iter().map(|i| points[i].clone()).collect::<Vec<_>>();
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if !present.contains(&(a & b).bits()) {
                    return Err(TopologyError::NotClosedUnderIntersection(names(a), names(b)));
                }
                if !present.contains(&(a | b).bits()) {
                    return Err(TopologyError::NotClosedUnderUnion(names(a), names(b)));
                }
            }
        }
        Ok(Self::trusted(points, opens))
    }

    /// Builds a space from a family already known to be a sorted topology.
    fn trusted(points: Vec<String>, opens: Vec<PointSet>) -> Self {
        let whole = PointSet::full(points.len());
        let neighbourhoods = (0..points.len())
            .map(|x| opens.iter().filter(|o| o.contains(x)).fold(whole, |acc, &o| acc & o))
            .collect();
        TopoSpace { points, opens, neighbourhoods }
    }

    /// The coarsest topology containing every set in `sets`: close under
    /// finite intersections (the empty intersection being the whole space),
    /// then under unions (the empty union being the empty set).
    pub fn from_subbasis<S: AsRef<str>, T: AsRef<str>>(points: &[S], sets: &[Vec<T>]) -> Result<Self> {
        let (points, index) = canonical_points(points)?;
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            let mask = mask_of(&index, set).ok_or_else(|| {
                TopologyError::SetNotSubsetOfPoints(set.iter().map(|s| s.as_ref().to_string()).collect())
            })?;
            masks.push(mask);
        }
        Ok(Self::generate(points, &masks))
    }

    /// [`TopoSpace::from_subbasis`] over bitmasks; `points` must be sorted.
    pub fn generate(points: Vec<String>, sets: &[PointSet]) -> Self {
        let whole = PointSet::full(points.len());
        let mut basis: BTreeSet<u64> = sets.iter().map(|s| (*s & whole).bits()).collect();
        basis.insert(whole.bits());
        close_under(&mut basis, |a, b| a & b);
        basis.insert(0);
        close_under(&mut basis, |a, b| a | b);
        let mut opens: Vec<PointSet> = basis.into_iter().map(PointSet::from_bits).collect();
        sort_family(&mut opens);
        Self::trusted(points, opens)
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

    pub fn whole(&self) -> PointSet {
        PointSet::full(self.points.len())
    }

    /// Open sets in lexicographic order of their member lists.
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn is_open(&self, a: PointSet) -> bool {
        self.opens.binary_search_by(|o| o.lex_cmp(a)).is_ok()
    }

    /// The smallest open set containing `x`.
    pub fn neighbourhood(&self, x: usize) -> PointSet {
        self.neighbourhoods[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    /// Resolves point names to a set.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet> {
        names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Option<Vec<_>>>()
            .map(PointSet::from_indices)
            .ok_or_else(|| TopologyError::SetNotSubsetOfPoints(names.iter().map(|s| s.as_ref().to_string()).collect()))
    }

    pub fn names_of(&self, s: PointSet) -> Vec<String> {
        s.iter().filter_map(|i| self.points.get(i).cloned()).collect()
    }

    fn check(&self, a: PointSet) -> Result<PointSet> {
        if a.is_subset(self.whole()) {
            Ok(a)
        } else {
            Err(TopologyError::SetNotSubsetOfPoints(
                a.iter().map(|i| self.points.get(i).cloned().unwrap_or_else(|| format!("#{i}"))).collect(),
            ))
        }
    }

    /// Interior of `a ∩ X`: the points whose smallest neighbourhood fits in `a`.
    pub fn int(&self, a: PointSet) -> PointSet {
        PointSet::from_indices((0..self.points.len()).filter(|&x| self.neighbourhoods[x].is_subset(a)))
    }

    /// Closure of `a ∩ X`.
    pub fn cl(&self, a: PointSet) -> PointSet {
        let whole = self.whole();
        whole - self.int(whole - a)
    }

    pub fn interior(&self, a: PointSet) -> Result<PointSet> {
        Ok(self.int(self.check(a)?))
    }

    pub fn closure(&self, a: PointSet) -> Result<PointSet> {
        Ok(self.cl(self.check(a)?))
    }

    /// `a \ b` is nowhere dense.
    pub fn almost_subset(&self, a: PointSet, b: PointSet) -> bool {
        self.int(self.cl(a - b)).is_empty()
    }

    pub fn subset_star(&self, a: PointSet, b: PointSet) -> Result<bool> {
        Ok(self.almost_subset(self.check(a)?, self.check(b)?))
    }

    pub fn density_flags(&self, v: PointSet, u: PointSet) -> Result<DensityFlags> {
        let (v, u) = (self.check(v)?, self.check(u)?);
        let cl_v = self.cl(v);
        Ok(DensityFlags { dense_in_u: u.is_subset(cl_v), nowhere_dense: self.int(cl_v).is_empty() })
    }

    /// Open sets as name lists, in canonical order.
    pub fn open_names(&self) -> Vec<Vec<String>> {
        self.opens.iter().map(|&o| self.names_of(o)).collect()
    }

    /// Canonical order on spaces over the same points: fewer opens first,
    /// then lexicographic on the sorted open lists.
    pub fn canonical_cmp(&self, other: &TopoSpace) -> Ordering {
        self.opens
            .len()
            .cmp(&other.opens.len())
            .then_with(|| {
                self.opens.iter().zip(&other.opens).map(|(a, b)| a.lex_cmp(*b)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
            })
    }
}

fn close_under(family: &mut BTreeSet<u64>, op: impl Fn(u64, u64) -> u64) {
    loop {
        let current: Vec<u64> = family.iter().copied().collect();
        let mut grew = false;
        for (i, &a) in current.iter().enumerate() {
            for &b in &current[i + 1..] {
                grew |= family.insert(op(a, b));
            }
        }
        if !grew {
            return;
        }
    }
}

/// Checks transitivity of a relation given as successor sets, returning the
/// lexicographically first witness `(x, y, z)` with `xRy`, `yRz`, not `xRz`.
pub(crate) fn transitivity_witness(succ: &[PointSet]) -> Option<(usize, usize, usize)> {
    for (x, &sx) in succ.iter().enumerate() {
        for y in sx.iter() {
            if let Some(z) = (succ[y] - sx).first() {
                return Some((x, y, z));
            }
        }
    }
    None
}

/// The Alexandroff topology of a transitive relation: the sets
/// `R⁺(x) = R(x) ∪ {x}` form a basis and each is the smallest open set
/// around its point.
pub fn alexandroff_from_relation<S: AsRef<str>>(points: &[S], pairs: &[(S, S)]) -> Result<TopoSpace> {
    let (points, index) = canonical_points(points)?;
    let mut succ = vec![PointSet::EMPTY; points.len()];
    for (a, b) in pairs {
        let pair = [a.as_ref(), b.as_ref()];
        let (Some(&x), Some(&y)) = (index.get(pair[0]), index.get(pair[1])) else {
            return Err(TopologyError::SetNotSubsetOfPoints(pair.iter().map(|s| s.to_string()).collect()));
        };
        succ[x].insert(y);
    }
    alexandroff_from_successors(points, &succ)
}

/// [`alexandroff_from_relation`] over successor bitmasks; `points` sorted.
pub fn alexandroff_from_successors(points: Vec<String>, succ: &[PointSet]) -> Result<TopoSpace> {
    if let Some((x, y, z)) = transitivity_witness(succ) {
        return Err(TopologyError::NotTransitive(points[x].clone(), points[y].clone(), points[z].clone()));
    }
    let basis: Vec<PointSet> = succ.iter().enumerate().map(|(x, &s)| s | PointSet::singleton(x)).collect();
    Ok(TopoSpace::generate(points, &basis))
}

/// Default labels `a, b, c, ...` for generated spaces.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("w{i}")
            }
        })
        .collect()
}

/// Every topology on `n` labelled points (labels `a, b, ...`), each once,
/// in canonical order (see [`TopoSpace::canonical_cmp`]).
pub fn enumerate_topologies(n: usize) -> Result<Vec<TopoSpace>> {
    if !(1..=MAX_ENUMERATION_POINTS).contains(&n) {
        return Err(TopologyError::BoundExceeded {
            what: "points",
            requested: n,
            min: 1,
            max: MAX_ENUMERATION_POINTS,
        });
    }
    let full = (1u64 << n) - 1;
    let mut families = Vec::new();
    extend_families(1, full, 1, 0, &mut families);
    let labels = default_labels(n);
    let mut spaces: Vec<TopoSpace> = families
        .into_iter()
        .map(|family| {
            let mut opens: Vec<PointSet> =
                (0..=full).filter(|&s| family >> s & 1 == 1).map(PointSet::from_bits).collect();
            sort_family(&mut opens);
            TopoSpace::trusted(labels.clone(), opens)
        })
        .collect();
    spaces.sort_by(|a, b| a.canonical_cmp(b));
    Ok(spaces)
}

/// Decides the candidate subsets in increasing bitmask order. `family` has
/// bit `s` set when subset `s` is open. Intersections of a new set with
/// earlier ones are numerically smaller, so they are already decided; unions
/// are larger and get recorded in `required`.
fn extend_families(idx: u64, full: u64, family: u64, required: u64, out: &mut Vec<u64>) {
    if idx == full {
        out.push(family | 1 << full);
        return;
    }
    let mut closed = true;
    let mut need = required;
    let mut rest = family;
    while rest != 0 {
        let t = rest.trailing_zeros() as u64;
        rest &= rest - 1;
        if family >> (t & idx) & 1 == 0 {
            closed = false;
            break;
        }
        need |= 1 << (t | idx);
    }
    if closed {
        extend_families(idx + 1, full, family | 1 << idx, need, out);
    }
    if required >> idx & 1 == 0 {
        extend_families(idx + 1, full, family, required, out);
    }
}
