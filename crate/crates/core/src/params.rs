//! The rainbow covering number and its relatives on the clutter side, and the
//! connectivity of a set-system on the polyhedral side.
//!
//! Each parameter has its own search; none is derived from another, so that
//! comparing them is a real check.

use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::clutter::{Clutter, ExtNat, MemberSet};
use crate::obstructions::combinations;
use crate::structure::{self, MinCoverGraph, SetSystem, Side, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("the core is empty")]
    EmptyCore,
    #[error("the pattern's sides do not form a cover")]
    NotACover,
    #[error("coordinate {index} outside dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("positive and negated coordinates overlap")]
    OverlappingGsc,
    #[error("pattern has {got} entries for {expected} components")]
    PatternLength { got: usize, expected: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// `sum_{i in I} x_i + sum_{j in J} (1 - x_j) >= 1`, coordinates 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GscInequality {
    pub positive: MemberSet,
    pub negated: MemberSet,
}

impl GscInequality {
    pub fn new(positive: MemberSet, negated: MemberSet) -> Result<Self, ParamError> {
        if positive.intersects(negated) {
            return Err(ParamError::OverlappingGsc);
        }
        Ok(GscInequality { positive, negated })
    }

    pub fn support(&self) -> MemberSet {
        self.positive.union(self.negated)
    }

    pub fn variables(&self) -> usize {
        self.support().len()
    }

    /// Whether `point` lies in the subcube the inequality cuts off.
    pub fn violated_by(&self, point: MemberSet) -> bool {
        !point.intersects(self.positive) && self.negated.is_subset(point)
    }
}

impl fmt::Display for GscInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(usize, bool)> = self
            .positive
            .iter()
            .map(|i| (i, true))
            .chain(self.negated.iter().map(|j| (j, false)))
            .collect();
        terms.sort();
        if terms.is_empty() {
            return f.write_str("0 >= 1");
        }
        for (k, (i, pos)) in terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if *pos {
                write!(f, "x{i}")?;
            } else {
                write!(f, "(1 - x{i})")?;
            }
        }
        f.write_str(" >= 1")
    }
}

/// Per component: skip it, or take its whole `U` or `V` side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SidePattern(pub Vec<Option<Side>>);

impl SidePattern {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of components touched.
    pub fn chosen(&self) -> usize {
        self.0.iter().filter(|c| c.is_some()).count()
    }

    pub fn union(&self, g: &MinCoverGraph) -> MemberSet {
        self.0
            .iter()
            .zip(&g.components)
            .fold(MemberSet::EMPTY, |acc, (choice, comp)| match choice {
                Some(side) => acc.union(comp.side(*side)),
                None => acc,
            })
    }

    /// The pattern whose sides contain `set`, if `set` is monochromatic.
    pub fn containing(set: MemberSet, g: &MinCoverGraph) -> Option<SidePattern> {
        g.components
            .iter()
            .map(|comp| {
                let trace = set.intersection(comp.vertices());
                if trace.is_empty() {
                    Some(None)
                } else if trace.is_subset(comp.u) {
                    Some(Some(Side::U))
                } else if trace.is_subset(comp.v) {
                    Some(Some(Side::V))
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(SidePattern)
    }

    /// All `3^d` patterns in lexicographic order (skip < U < V).
    pub fn all(d: usize) -> impl Iterator<Item = SidePattern> {
        let total = 3u64.checked_pow(d as u32).expect("3^d overflows");
        (0..total).map(move |mut code| {
            let mut choices = vec![None; d];
            for slot in choices.iter_mut().rev() {
                *slot = match code % 3 {
                    0 => None,
                    1 => Some(Side::U),
                    _ => Some(Side::V),
                };
                code /= 3;
            }
            SidePattern(choices)
        })
    }
}

impl fmt::Display for SidePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(match c {
                None => "-",
                Some(Side::U) => "U",
                Some(Side::V) => "V",
            })?;
        }
        Ok(())
    }
}

impl Serialize for SidePattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn is_rainbow_cover(c: &Clutter, g: &MinCoverGraph, b: MemberSet) -> bool {
    c.is_cover(b) && g.components.iter().all(|comp| b.intersection(comp.vertices()).len() <= 1)
}

/// Lexicographically least cover of `targets` of minimum size that takes at
/// most one vertex per component.
fn min_one_per_component(targets: &[MemberSet], g: &MinCoverGraph) -> Option<MemberSet> {
    let d = g.d();
    // open[i]: vertices of components i..d
    let mut open = vec![MemberSet::EMPTY; d + 1];
    for i in (0..d).rev() {
        open[i] = open[i + 1].union(g.components[i].vertices());
    }

    struct Search<'a> {
        targets: &'a [MemberSet],
        g: &'a MinCoverGraph,
        open: &'a [MemberSet],
        size: usize,
        best: Option<MemberSet>,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize, chosen: MemberSet) {
            let count = chosen.len();
            if count > self.size || count + (self.g.d() - i) < self.size {
                return;
            }
            let reach = chosen.union(self.open[i]);
            if self.targets.iter().any(|t| !t.intersects(reach)) {
                return;
            }
            if i == self.g.d() {
                if self.best.map_or(true, |b| chosen < b) {
                    self.best = Some(chosen);
                }
                return;
            }
            self.go(i + 1, chosen);
            for v in self.g.components[i].vertices().iter() {
                self.go(i + 1, chosen.with(v));
            }
        }
    }

    (0..=d).find_map(|size| {
        let mut search = Search {
            targets,
            g,
            open: &open,
            size,
            best: None,
        };
        search.go(0, MemberSet::EMPTY);
        search.best
    })
}

/// `mu`: the minimum size of a cover meeting every component at most once.
pub fn rainbow_covering_number(c: &Clutter, g: &MinCoverGraph) -> (ExtNat, Option<MemberSet>) {
    match min_one_per_component(c.members(), g) {
        Some(b) => (ExtNat::from(b.len()), Some(b)),
        None => (ExtNat::Infinity, None),
    }
}

/// `mu_1`: the minimum size of a monochromatic cover of the core. Minimal
/// such covers take one vertex per component they touch.
pub fn mu1(core: &[MemberSet], g: &MinCoverGraph) -> Result<(ExtNat, Option<MemberSet>), ParamError> {
    if core.is_empty() {
        return Err(ParamError::EmptyCore);
    }
    Ok(match min_one_per_component(core, g) {
        Some(b) => (ExtNat::from(b.len()), Some(b)),
        None => (ExtNat::Infinity, None),
    })
}

fn best_pattern(
    c: &Clutter,
    g: &MinCoverGraph,
    mut accept: impl FnMut(&SidePattern) -> bool,
) -> (ExtNat, Option<SidePattern>) {
    // ties go to the pattern whose union is least in member order
    let mut best: Option<(usize, MemberSet, SidePattern)> = None;
    for p in SidePattern::all(g.d()) {
        let key = (p.chosen(), p.union(g));
        if best.as_ref().is_some_and(|(k, u, _)| (*k, *u) <= key) {
            continue;
        }
        if c.is_cover(key.1) && accept(&p) {
            best = Some((key.0, key.1, p));
        }
    }
    match best {
        Some((k, _, p)) => (ExtNat::from(k), Some(p)),
        None => (ExtNat::Infinity, None),
    }
}

/// `mu_2`: fewest components touched by a monochromatic cover. Enlarging a
/// monochromatic cover to whole sides keeps it a monochromatic cover, so
/// full-side patterns suffice.
pub fn mu2(c: &Clutter, g: &MinCoverGraph) -> (ExtNat, Option<SidePattern>) {
    best_pattern(c, g, |_| true)
}

/// A covering pattern is irreducible when flipping any one chosen component to
/// its other side loses the cover property.
pub fn is_irreducible(c: &Clutter, g: &MinCoverGraph, p: &SidePattern) -> Result<bool, ParamError> {
    if p.len() != g.d() {
        return Err(ParamError::PatternLength {
            got: p.len(),
            expected: g.d(),
        });
    }
    if !c.is_cover(p.union(g)) {
        return Err(ParamError::NotACover);
    }
    Ok(irreducible_unchecked(c, g, p))
}

fn irreducible_unchecked(c: &Clutter, g: &MinCoverGraph, p: &SidePattern) -> bool {
    (0..p.len()).filter(|&j| p.0[j].is_some()).all(|j| {
        let mut flipped = p.clone();
        flipped.0[j] = flipped.0[j].map(Side::flip);
        !c.is_cover(flipped.union(g))
    })
}

/// `mu_3`: fewest components touched by an irreducible monochromatic cover.
pub fn mu3(c: &Clutter, g: &MinCoverGraph) -> (ExtNat, Option<SidePattern>) {
    best_pattern(c, g, |p| irreducible_unchecked(c, g, p))
}

/// Validity over `conv(s)` reduces to the 0/1 points: no point may lie in the
/// subcube `x_I = 0, x_J = 1`.
pub fn gsc_valid(s: &SetSystem, q: &GscInequality) -> Result<bool, ParamError> {
    if let Some(index) = q.support().last().filter(|&i| i > s.dimension()) {
        return Err(ParamError::IndexOutOfRange {
            index,
            dimension: s.dimension(),
        });
    }
    if q.positive.intersects(q.negated) {
        return Err(ParamError::OverlappingGsc);
    }
    Ok(!s.points().iter().any(|&p| q.violated_by(p)))
}

/// `lambda`: the fewest variables in a valid GSC inequality, infinite for the
/// full cube. For each support `K`, by increasing size, an inequality on `K`
/// is valid exactly when some 0/1 pattern on `K` is realized by no point.
pub fn connectivity(s: &SetSystem) -> (ExtNat, Option<GscInequality>) {
    let d = s.dimension();
    for k in 0..=d {
        for support in combinations(d, k) {
            let coords = support.to_vec();
            let realized: HashSet<u64> = s.points().iter().map(|p| pack(*p, &coords)).collect();
            if (realized.len() as u128) < 1u128 << k {
                let missing = (0u64..).find(|r| !realized.contains(r)).unwrap();
                // the missing pattern names the coordinates fixed to 1: J
                let negated = unpack(missing, &coords);
                let q = GscInequality {
                    positive: support.difference(negated),
                    negated,
                };
                return (ExtNat::from(k), Some(q));
            }
        }
    }
    assert!(s.is_full_cube(), "no valid GSC inequality, yet points are missing");
    (ExtNat::Infinity, None)
}

fn pack(point: MemberSet, coords: &[usize]) -> u64 {
    coords
        .iter()
        .enumerate()
        .fold(0, |acc, (bit, &i)| acc | (point.contains(i) as u64) << bit)
}

fn unpack(bits: u64, coords: &[usize]) -> MemberSet {
    coords
        .iter()
        .enumerate()
        .filter(|(bit, _)| bits >> bit & 1 == 1)
        .map(|(_, &i)| i)
        .collect()
}

/// A one-vertex-per-component selection read as a GSC inequality: a vertex of
/// `V_i` puts `i` in `I`, a vertex of `U_i` puts `i` in `J`.
pub fn selection_to_gsc(selection: MemberSet, g: &MinCoverGraph) -> GscInequality {
    let mut positive = MemberSet::EMPTY;
    let mut negated = MemberSet::EMPTY;
    for (i, comp) in g.components.iter().enumerate() {
        if selection.intersects(comp.v) {
            positive = positive.with(i + 1);
        } else if selection.intersects(comp.u) {
            negated = negated.with(i + 1);
        }
    }
    GscInequality { positive, negated }
}

/// The inverse direction, taking the smallest vertex of each named side.
pub fn gsc_to_selection(q: &GscInequality, g: &MinCoverGraph) -> MemberSet {
    let pick = |i: usize, side: Side| g.components[i - 1].side(side).first().expect("sides are nonempty");
    q.positive
        .iter()
        .map(|i| pick(i, Side::V))
        .chain(q.negated.iter().map(|j| pick(j, Side::U)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct Witnesses {
    pub rainbow_cover: Option<MemberSet>,
    pub core_cover: Option<MemberSet>,
    pub mu2_pattern: Option<SidePattern>,
    pub mu3_pattern: Option<SidePattern>,
    pub gsc: Option<GscInequality>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamReport {
    pub mu: ExtNat,
    pub mu1: ExtNat,
    pub mu2: ExtNat,
    pub mu3: ExtNat,
    pub lambda: ExtNat,
    pub witnesses: Witnesses,
}

impl ParamReport {
    pub fn values(&self) -> [ExtNat; 5] {
        [self.mu, self.mu1, self.mu2, self.mu3, self.lambda]
    }

    pub fn all_equal(&self) -> bool {
        self.values().iter().all(|v| *v == self.mu)
    }
}

/// All five parameters, each from its own search.
pub fn param_report(c: &Clutter) -> Result<ParamReport, ParamError> {
    let g = structure::min_cover_graph(c)?;
    param_report_with(c, &g)
}

pub fn param_report_with(c: &Clutter, g: &MinCoverGraph) -> Result<ParamReport, ParamError> {
    let core = structure::core(c)?;
    let setcore = structure::setcore_with(c, g)?;
    let (mu, rainbow_cover) = rainbow_covering_number(c, g);
    let (mu1, core_cover) = mu1(&core, g)?;
    let (mu2, mu2_pattern) = mu2(c, g);
    let (mu3, mu3_pattern) = mu3(c, g);
    let (lambda, gsc) = connectivity(&setcore);
    Ok(ParamReport {
        mu,
        mu1,
        mu2,
        mu3,
        lambda,
        witnesses: Witnesses {
            rainbow_cover,
            core_cover,
            mu2_pattern,
            mu3_pattern,
            gsc,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{make_family, Family};
    use crate::structure::min_cover_graph;

    fn c(n: usize, members: &[&[usize]]) -> Clutter {
        let raw: Vec<Vec<usize>> = members.iter().map(|m| m.to_vec()).collect();
        Clutter::validate(n, &raw).unwrap()
    }

    fn set(elements: &[usize]) -> MemberSet {
        MemberSet::from_elements(elements.iter().copied())
    }

    fn c4() -> Clutter {
        c(4, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4]])
    }

    fn two() -> Clutter {
        c(2, &[&[1], &[2]])
    }

    fn f6() -> Clutter {
        make_family(&Family::f6()).unwrap()
    }

    fn cube_minus_top() -> SetSystem {
        SetSystem::new(3, (0..7).map(MemberSet::from_bits).collect()).unwrap()
    }

    /// Minimum rainbow cover by checking every subset of the ground set.
    fn mu_by_subsets(cl: &Clutter, g: &MinCoverGraph) -> ExtNat {
        (0..1u64 << cl.ground_size())
            .map(MemberSet::from_bits)
            .filter(|&b| is_rainbow_cover(cl, g, b))
            .map(|b| ExtNat::from(b.len()))
            .min()
            .unwrap_or(ExtNat::Infinity)
    }

    #[test]
    fn rainbow_examples() {
        let f = f6();
        let g = min_cover_graph(&f).unwrap();
        assert!(is_rainbow_cover(&f, &g, set(&[2, 4, 6])));
        assert!(!is_rainbow_cover(&f, &g, set(&[1, 2, 3])));
        let g4 = min_cover_graph(&c4()).unwrap();
        assert!(!is_rainbow_cover(&c4(), &g4, set(&[1, 2])));

        assert_eq!(mu_by_subsets(&f, &g), ExtNat::Finite(3));
        assert_eq!(rainbow_covering_number(&f, &g), (ExtNat::Finite(3), Some(set(&[2, 4, 6]))));
        assert_eq!(rainbow_covering_number(&c4(), &g4), (ExtNat::Infinity, None));
        let g2 = min_cover_graph(&two()).unwrap();
        assert_eq!(rainbow_covering_number(&two(), &g2), (ExtNat::Infinity, None));
    }

    #[test]
    fn mu1_examples() {
        let f = f6();
        let g = min_cover_graph(&f).unwrap();
        assert_eq!(mu1(f.members(), &g).unwrap().0, ExtNat::Finite(3));
        let g4 = min_cover_graph(&c4()).unwrap();
        assert_eq!(mu1(c4().members(), &g4).unwrap().0, ExtNat::Infinity);
        let g2 = min_cover_graph(&two()).unwrap();
        assert_eq!(mu1(two().members(), &g2).unwrap().0, ExtNat::Infinity);
        assert_eq!(mu1(&[], &g2), Err(ParamError::EmptyCore));
    }

    #[test]
    fn pattern_parameters() {
        let f = f6();
        let g = min_cover_graph(&f).unwrap();
        let (v, p) = mu2(&f, &g);
        assert_eq!(v, ExtNat::Finite(3));
        let p = p.unwrap();
        assert!(f.is_cover(p.union(&g)));
        assert_eq!(p.to_string(), "VVV");
        assert_eq!(mu3(&f, &g).0, ExtNat::Finite(3));

        let g4 = min_cover_graph(&c4()).unwrap();
        assert_eq!(mu2(&c4(), &g4), (ExtNat::Infinity, None));
        assert_eq!(mu3(&c4(), &g4), (ExtNat::Infinity, None));
        let g2 = min_cover_graph(&two()).unwrap();
        assert_eq!(mu2(&two(), &g2).0, ExtNat::Infinity);
        assert_eq!(mu3(&two(), &g2).0, ExtNat::Infinity);
    }

    #[test]
    fn irreducibility() {
        let f = f6();
        let g = min_cover_graph(&f).unwrap();
        let vvv = SidePattern(vec![Some(Side::V); 3]);
        assert_eq!(is_irreducible(&f, &g, &vvv), Ok(true));
        let uv_ = SidePattern(vec![Some(Side::U), Some(Side::V), None]);
        assert_eq!(is_irreducible(&f, &g, &uv_), Err(ParamError::NotACover));

        // Over components ({1},{2}) and ({3},{4}), the sides {1},{3} cover
        // {{1,3},{1,4}} and so does {1},{4} after flipping the second one.
        let cl = c(4, &[&[1, 3], &[1, 4]]);
        let g = MinCoverGraph::from_edges(4, vec![(1, 2), (3, 4)]).unwrap();
        let p = SidePattern(vec![Some(Side::U), Some(Side::U)]);
        assert!(cl.is_cover(p.union(&g)));
        assert_eq!(is_irreducible(&cl, &g, &p), Ok(false));
    }

    #[test]
    fn gsc_examples() {
        let s = cube_minus_top();
        let all = set(&[1, 2, 3]);
        assert_eq!(gsc_valid(&s, &GscInequality::new(MemberSet::EMPTY, all).unwrap()), Ok(true));
        assert_eq!(gsc_valid(&s, &GscInequality::new(set(&[1]), MemberSet::EMPTY).unwrap()), Ok(false));
        let empty = GscInequality::new(MemberSet::EMPTY, MemberSet::EMPTY).unwrap();
        assert_eq!(gsc_valid(&s, &empty), Ok(false));
        assert_eq!(gsc_valid(&SetSystem::new(3, vec![]).unwrap(), &empty), Ok(true));
        assert!(matches!(
            gsc_valid(&s, &GscInequality::new(set(&[4]), MemberSet::EMPTY).unwrap()),
            Err(ParamError::IndexOutOfRange { index: 4, dimension: 3 })
        ));
        assert_eq!(GscInequality::new(set(&[1]), set(&[1])), Err(ParamError::OverlappingGsc));
    }

    #[test]
    fn connectivity_examples() {
        for d in 0..=3 {
            assert_eq!(connectivity(&SetSystem::cube(d)), (ExtNat::Infinity, None));
        }
        let (l, q) = connectivity(&cube_minus_top());
        assert_eq!(l, ExtNat::Finite(3));
        assert_eq!(q, Some(GscInequality { positive: MemberSet::EMPTY, negated: set(&[1, 2, 3]) }));

        let origin = SetSystem::new(2, vec![MemberSet::EMPTY]).unwrap();
        let (l, q) = connectivity(&origin);
        assert_eq!(l, ExtNat::Finite(1));
        assert_eq!(q, Some(GscInequality { positive: MemberSet::EMPTY, negated: set(&[1]) }));

        let empty = SetSystem::new(2, vec![]).unwrap();
        let (l, q) = connectivity(&empty);
        assert_eq!(l, ExtNat::Finite(0));
        assert_eq!(q, Some(GscInequality { positive: MemberSet::EMPTY, negated: MemberSet::EMPTY }));
    }

    #[test]
    fn report_examples() {
        let r = param_report(&f6()).unwrap();
        assert_eq!(r.values(), [ExtNat::Finite(3); 5]);
        assert_eq!(r.witnesses.rainbow_cover, Some(set(&[2, 4, 6])));
        assert_eq!(r.witnesses.gsc.unwrap().variables(), 3);

        let r = param_report(&c4()).unwrap();
        assert_eq!(r.values(), [ExtNat::Infinity; 5]);
        let r = param_report(&two()).unwrap();
        assert_eq!(r.values(), [ExtNat::Infinity; 5]);
    }

    #[test]
    fn witness_translation_round_trip() {
        let f = f6();
        let g = min_cover_graph(&f).unwrap();
        let q = selection_to_gsc(set(&[2, 4, 6]), &g);
        assert_eq!(q, GscInequality { positive: set(&[1, 2, 3]), negated: MemberSet::EMPTY });
        assert_eq!(gsc_to_selection(&q, &g), set(&[2, 4, 6]));
    }

    #[test]
    fn report_json_shape() {
        let r = param_report(&c4()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["mu"], "inf");
        assert_eq!(v["lambda"], "inf");
        assert!(v["witnesses"]["rainbow_cover"].is_null());
        let r = param_report(&f6()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["mu"], 3);
        assert_eq!(v["witnesses"]["rainbow_cover"], serde_json::json!([2, 4, 6]));
    }
}
