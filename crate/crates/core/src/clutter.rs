//! Clutters over a ground set `[n]`, covers, the blocker and minors.
//!
//! Elements are 1-based (`1..=n`) everywhere in the public API. A member is a
//! [`MemberSet`], a fixed-width bit vector with bit `i - 1` standing for
//! element `i`, so ground sets are limited to [`MAX_GROUND`] elements.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClutterError {
    #[error("member {inner} is contained in member {outer}")]
    NotAntichain { inner: MemberSet, outer: MemberSet },
    #[error("member {0} appears more than once")]
    DuplicateMember(MemberSet),
    #[error("element {element} is outside the ground set [1, {ground_size}]")]
    ElementOutOfRange { element: usize, ground_size: usize },
    #[error("ground set of size {0} exceeds the supported maximum of {MAX_GROUND}")]
    GroundSetTooLarge(usize),
    #[error("the clutter has no cover")]
    InfiniteCoveringNumber,
    #[error("minor spec is invalid: {0}")]
    InvalidMinorSpec(String),
}

/// A subset of the ground set, stored as a bit vector.
///
/// Ordering is lexicographic on characteristic vectors `(x_1, x_2, ...)`,
/// which is the canonical member order of a [`Clutter`].
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct MemberSet(u64);

impl MemberSet {
    pub const EMPTY: MemberSet = MemberSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        MemberSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The full set `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            MemberSet(u64::MAX)
        } else {
            MemberSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(element: usize) -> Self {
        assert!((1..=MAX_GROUND).contains(&element));
        MemberSet(1u64 << (element - 1))
    }

    /// Panics on elements outside `1..=64`; use [`MemberSet::try_from_elements`]
    /// for untrusted input.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements
            .into_iter()
            .fold(MemberSet::EMPTY, |acc, e| acc.with(e))
    }

    pub fn try_from_elements<I: IntoIterator<Item = usize>>(
        elements: I,
        ground_size: usize,
    ) -> Result<Self, ClutterError> {
        let mut set = MemberSet::EMPTY;
        for e in elements {
            if e == 0 || e > ground_size {
                return Err(ClutterError::ElementOutOfRange {
                    element: e,
                    ground_size,
                });
            }
            set = set.with(e);
        }
        Ok(set)
    }

    pub fn with(self, element: usize) -> Self {
        MemberSet(self.0 | MemberSet::singleton(element).0)
    }

    pub fn without(self, element: usize) -> Self {
        MemberSet(self.0 & !MemberSet::singleton(element).0)
    }

    pub fn contains(self, element: usize) -> bool {
        (1..=MAX_GROUND).contains(&element) && self.0 & (1u64 << (element - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: MemberSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: MemberSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: MemberSet) -> MemberSet {
        MemberSet(self.0 | other.0)
    }

    pub fn intersection(self, other: MemberSet) -> MemberSet {
        MemberSet(self.0 & other.0)
    }

    pub fn difference(self, other: MemberSet) -> MemberSet {
        MemberSet(self.0 & !other.0)
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest element, if any.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| MAX_GROUND - self.0.leading_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for MemberSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.reverse_bits().cmp(&other.0.reverse_bits())
    }
}

impl PartialOrd for MemberSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for MemberSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl FromIterator<usize> for MemberSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        MemberSet::from_elements(iter)
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

/// A natural number or `+inf`. `Infinity` compares above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinity,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(v) => Some(v),
            ExtNat::Infinity => None,
        }
    }
}

impl From<usize> for ExtNat {
    fn from(v: usize) -> Self {
        ExtNat::Finite(v as u64)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(v) => serializer.serialize_u64(*v),
            ExtNat::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// The pair `(I, J)` of a minor `C \ I / J`: delete `I`, contract `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct MinorSpec {
    pub delete: MemberSet,
    pub contract: MemberSet,
}

impl MinorSpec {
    pub fn new(delete: MemberSet, contract: MemberSet) -> Self {
        MinorSpec { delete, contract }
    }

    /// The dual spec: contract what was deleted and delete what was contracted.
    pub fn swapped(self) -> Self {
        MinorSpec {
            delete: self.contract,
            contract: self.delete,
        }
    }
}

/// A minor together with the relabeling back to the parent's elements:
/// element `k` of the minor is element `origin[k - 1]` of the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minor {
    pub clutter: Clutter,
    pub origin: Vec<usize>,
}

/// An antichain of subsets of `[ground_size]`, members kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clutter {
    ground_size: usize,
    members: Vec<MemberSet>,
}

impl Clutter {
    /// Builds a clutter from raw 1-based element lists, rejecting anything that
    /// is not already an antichain.
    pub fn validate(ground_size: usize, raw_members: &[Vec<usize>]) -> Result<Clutter, ClutterError> {
        if ground_size > MAX_GROUND {
            return Err(ClutterError::GroundSetTooLarge(ground_size));
        }
        let sets = raw_members
            .iter()
            .map(|m| MemberSet::try_from_elements(m.iter().copied(), ground_size))
            .collect::<Result<Vec<_>, _>>()?;
        Clutter::from_sets(ground_size, sets)
    }

    /// Same as [`Clutter::validate`] for members already in bit form.
    pub fn from_sets(ground_size: usize, mut sets: Vec<MemberSet>) -> Result<Clutter, ClutterError> {
        if ground_size > MAX_GROUND {
            return Err(ClutterError::GroundSetTooLarge(ground_size));
        }
        let full = MemberSet::full(ground_size);
        if let Some(bad) = sets.iter().find(|s| !s.is_subset(full)) {
            return Err(ClutterError::ElementOutOfRange {
                element: bad.difference(full).first().unwrap_or(0),
                ground_size,
            });
        }
        sets.sort();
        for w in sets.windows(2) {
            if w[0] == w[1] {
                return Err(ClutterError::DuplicateMember(w[0]));
            }
        }
        for (i, &a) in sets.iter().enumerate() {
            for &b in &sets[i + 1..] {
                if a.is_subset(b) {
                    return Err(ClutterError::NotAntichain { inner: a, outer: b });
                }
                if b.is_subset(a) {
                    return Err(ClutterError::NotAntichain { inner: b, outer: a });
                }
            }
        }
        Ok(Clutter {
            ground_size,
            members: sets,
        })
    }

    /// The clutter of inclusion-wise minimal sets of an arbitrary family.
    pub fn minimal_sets(ground_size: usize, sets: impl IntoIterator<Item = MemberSet>) -> Clutter {
        assert!(ground_size <= MAX_GROUND);
        Clutter {
            ground_size,
            members: minimalize(sets.into_iter().collect()),
        }
    }

    /// The clutter with no members.
    pub fn memberless(ground_size: usize) -> Clutter {
        assert!(ground_size <= MAX_GROUND);
        Clutter {
            ground_size,
            members: Vec::new(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn ground(&self) -> MemberSet {
        MemberSet::full(self.ground_size)
    }

    pub fn members(&self) -> &[MemberSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_member(&self, set: MemberSet) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    pub fn is_cover(&self, b: MemberSet) -> bool {
        self.members.iter().all(|&m| m.intersects(b))
    }

    /// `tau`: the minimum size of a cover. 0 for the memberless clutter and
    /// infinite when some member is empty.
    pub fn covering_number(&self) -> ExtNat {
        if self.members.iter().any(|m| m.is_empty()) {
            return ExtNat::Infinity;
        }
        let mut best = self.members.len();
        min_cover_search(&self.members, MemberSet::EMPTY, 0, &mut best);
        ExtNat::from(best)
    }

    /// All covers of size exactly `tau`, canonically ordered.
    pub fn minimum_covers(&self) -> Result<Vec<MemberSet>, ClutterError> {
        let tau = self
            .covering_number()
            .finite()
            .ok_or(ClutterError::InfiniteCoveringNumber)? as usize;
        // A cover of minimum size is always a minimal cover.
        Ok(self
            .blocker()
            .members
            .into_iter()
            .filter(|b| b.len() == tau)
            .collect())
    }

    /// The clutter of minimal covers.
    pub fn blocker(&self) -> Clutter {
        let mut order = self.members.clone();
        order.sort_by_key(|m| m.len());
        let mut transversals = vec![MemberSet::EMPTY];
        for member in order {
            let mut next = Vec::with_capacity(transversals.len());
            let mut extended = Vec::new();
            for &t in &transversals {
                if t.intersects(member) {
                    next.push(t);
                } else {
                    extended.extend(member.iter().map(|e| t.with(e)));
                }
            }
            // Kept transversals are pairwise incomparable already; an extension
            // only survives if none of them sits inside it.
            extended.sort_by_key(|s| s.len());
            extended.dedup();
            for cand in extended {
                if !next.iter().any(|t| t.is_subset(cand)) {
                    next.push(cand);
                }
            }
            transversals = next;
        }
        transversals.sort();
        transversals.dedup();
        Clutter {
            ground_size: self.ground_size,
            members: transversals,
        }
    }

    /// `C \ I / J`: drop members meeting `I`, remove `J` from the rest, keep the
    /// minimal sets, and relabel the remaining elements order-preservingly.
    pub fn minor(&self, spec: MinorSpec) -> Result<Minor, ClutterError> {
        let ground = self.ground();
        if spec.delete.intersects(spec.contract) {
            return Err(ClutterError::InvalidMinorSpec(format!(
                "delete {} and contract {} overlap",
                spec.delete, spec.contract
            )));
        }
        if !spec.delete.union(spec.contract).is_subset(ground) {
            return Err(ClutterError::InvalidMinorSpec(format!(
                "delete {} / contract {} leave the ground set [1, {}]",
                spec.delete, spec.contract, self.ground_size
            )));
        }
        let kept = ground.difference(spec.delete.union(spec.contract));
        let origin = kept.to_vec();
        let sets = self
            .members
            .iter()
            .filter(|m| !m.intersects(spec.delete))
            .map(|m| compress(m.difference(spec.contract), kept));
        Ok(Minor {
            clutter: Clutter::minimal_sets(origin.len(), sets),
            origin,
        })
    }

    /// Applies a permutation of the ground set: element `e` becomes `perm[e - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Clutter {
        assert_eq!(perm.len(), self.ground_size);
        let mut members: Vec<MemberSet> = self
            .members
            .iter()
            .map(|m| m.iter().map(|e| perm[e - 1]).collect())
            .collect();
        members.sort();
        Clutter {
            ground_size: self.ground_size,
            members,
        }
    }

    /// Raw 1-based member lists, in canonical order.
    pub fn to_raw(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.to_vec()).collect()
    }
}

impl Serialize for Clutter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Clutter", 2)?;
        st.serialize_field("ground_size", &self.ground_size)?;
        st.serialize_field("members", &self.members)?;
        st.end()
    }
}

impl fmt::Display for Clutter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}]{{", self.ground_size)?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Maps the elements of `set` (a subset of `kept`) to their ranks inside `kept`.
fn compress(set: MemberSet, kept: MemberSet) -> MemberSet {
    let mut out = 0u64;
    for (rank, e) in kept.iter().enumerate() {
        if set.contains(e) {
            out |= 1 << rank;
        }
    }
    MemberSet(out)
}

fn minimalize(mut sets: Vec<MemberSet>) -> Vec<MemberSet> {
    sets.sort_by_key(|s| (s.len(), *s));
    sets.dedup();
    let mut kept: Vec<MemberSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// Branch on the elements of the first uncovered member, bounding by `best`.
fn min_cover_search(members: &[MemberSet], chosen: MemberSet, size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    let Some(uncovered) = members.iter().copied().find(|m| !m.intersects(chosen)) else {
        *best = size;
        return;
    };
    if size + 1 >= *best {
        return;
    }
    for e in uncovered.iter() {
        min_cover_search(members, chosen.with(e), size + 1, best);
    }
}
