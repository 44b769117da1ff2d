//! Deltas, blockers of extended odd holes, and cleanness by minor enumeration.

use serde::Serialize;
use thiserror::Error;

use crate::clutter::{Clutter, MemberSet, MinorSpec};

/// Default bound on the ground set size for [`is_clean`] (3^12 minors).
pub const DEFAULT_CLEAN_BUDGET: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("ground set of size {ground_size} exceeds the minor enumeration bound {budget}")]
    BudgetExceeded { ground_size: usize, budget: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ObstructionKind {
    Delta,
    BlockerOfExtendedOddHole,
}

impl ObstructionKind {
    pub fn name(self) -> &'static str {
        match self {
            ObstructionKind::Delta => "delta",
            ObstructionKind::BlockerOfExtendedOddHole => "blocker-of-extended-odd-hole",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    pub kind: ObstructionKind,
    pub minor_spec: MinorSpec,
    pub dimension: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cleanness {
    pub witness: Option<ObstructionWitness>,
}

impl Cleanness {
    pub fn is_clean(&self) -> bool {
        self.witness.is_none()
    }
}

/// Returns `n` when `c` is isomorphic to the delta of dimension `n`: a hub `u`
/// with the pairs `{u, v}` for every other `v`, plus `V - {u}`.
pub fn recognize_delta(c: &Clutter) -> Option<usize> {
    let n = c.ground_size();
    if n < 3 || c.len() != n {
        return None;
    }
    let ground = c.ground();
    (1..=n).find_map(|hub| {
        let all = (1..=n)
            .filter(|&v| v != hub)
            .map(|v| MemberSet::singleton(hub).with(v))
            .chain(std::iter::once(ground.without(hub)))
            .all(|m| c.contains_member(m));
        all.then_some(n)
    })
}

/// Returns the odd `n >= 5` when `b(c)` is an extended odd hole of dimension `n`:
/// its minimum members are size-2 sets forming one Hamiltonian cycle on `[n]`.
pub fn recognize_blocker_of_extended_odd_hole(c: &Clutter) -> Option<usize> {
    let n = c.ground_size();
    if n < 5 || n % 2 == 0 {
        return None;
    }
    extended_odd_hole_dimension(&c.blocker())
}

/// The dimension of `hole` if it is itself an extended odd hole.
pub fn extended_odd_hole_dimension(hole: &Clutter) -> Option<usize> {
    let n = hole.ground_size();
    if n < 5 || n % 2 == 0 {
        return None;
    }
    let min_size = hole.members().iter().map(|m| m.len()).min()?;
    if min_size != 2 {
        return None;
    }
    let edges: Vec<MemberSet> = hole.members().iter().copied().filter(|m| m.len() == 2).collect();
    if edges.len() != n {
        return None;
    }
    let mut neighbours = vec![MemberSet::EMPTY; n + 1];
    for e in &edges {
        let mut it = e.iter();
        let (a, b) = (it.next()?, it.next()?);
        neighbours[a] = neighbours[a].with(b);
        neighbours[b] = neighbours[b].with(a);
    }
    if neighbours[1..].iter().any(|nb| nb.len() != 2) {
        return None;
    }
    // Walk the 2-regular graph from vertex 1; one cycle through all n vertices.
    let (mut prev, mut cur, mut steps) = (1usize, neighbours[1].first()?, 1usize);
    while cur != 1 {
        let next = neighbours[cur].without(prev).first()?;
        prev = cur;
        cur = next;
        steps += 1;
        if steps > n {
            return None;
        }
    }
    (steps == n).then_some(n)
}

/// Disjoint `(I, J)` pairs over `[n]` in order of increasing `|I| + |J|`;
/// within one size, supports in lexicographic order and then each of the
/// `2^k` ways of splitting the support.
pub fn minor_specs(n: usize) -> impl Iterator<Item = MinorSpec> {
    (0..=n).flat_map(move |k| {
        combinations(n, k).flat_map(move |support| {
            let elements = support.to_vec();
            (0..1u64 << k).map(move |split| {
                let mut delete = MemberSet::EMPTY;
                for (bit, &e) in elements.iter().enumerate() {
                    if split >> bit & 1 == 1 {
                        delete = delete.with(e);
                    }
                }
                MinorSpec::new(delete, support.difference(delete))
            })
        })
    })
}

/// All `k`-subsets of `[n]`, lexicographic on sorted element lists.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = MemberSet> {
    let mut state: Option<Vec<usize>> = (k <= n).then(|| (1..=k).collect());
    std::iter::from_fn(move || {
        let current = state.as_mut()?;
        let out = current.iter().copied().collect::<MemberSet>();
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                state = None;
                break;
            }
            i -= 1;
            if current[i] < n - (k - 1 - i) {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

fn obstruction_of(minor: &Clutter) -> Option<(ObstructionKind, usize)> {
    if let Some(n) = recognize_delta(minor) {
        return Some((ObstructionKind::Delta, n));
    }
    recognize_blocker_of_extended_odd_hole(minor).map(|n| (ObstructionKind::BlockerOfExtendedOddHole, n))
}

/// Searches every minor of `c` for a delta or the blocker of an extended odd
/// hole. The returned witness is the first one in [`minor_specs`] order.
pub fn is_clean(c: &Clutter, budget: Option<usize>) -> Result<Cleanness, ObstructionError> {
    let budget = budget.unwrap_or(DEFAULT_CLEAN_BUDGET);
    let n = c.ground_size();
    if n > budget {
        return Err(ObstructionError::BudgetExceeded { ground_size: n, budget });
    }
    // Both obstructions live on at least three elements.
    let witness = minor_specs(n)
        .take_while(|s| n - s.delete.len() - s.contract.len() >= 3)
        .find_map(|spec| {
            let minor = c.minor(spec).expect("enumerated specs are valid");
            obstruction_of(&minor.clutter).map(|(kind, dimension)| ObstructionWitness {
                kind,
                minor_spec: spec,
                dimension,
            })
        });
    Ok(Cleanness { witness })
}

/// Re-derives a witness: the named recognizer must accept the named minor.
pub fn check_witness(c: &Clutter, w: &ObstructionWitness) -> bool {
    let Ok(minor) = c.minor(w.minor_spec) else {
        return false;
    };
    let found = match w.kind {
        ObstructionKind::Delta => recognize_delta(&minor.clutter),
        ObstructionKind::BlockerOfExtendedOddHole => recognize_blocker_of_extended_odd_hole(&minor.clutter),
    };
    found == Some(w.dimension)
}
