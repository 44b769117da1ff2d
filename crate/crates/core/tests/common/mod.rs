//! Brute-force oracles over raw bitmasks. Nothing here calls the library's
//! algorithms; clutters are plain `(n, Vec<u64>)` with bit `i - 1` for element `i`.

#![allow(dead_code)]

use clutterlab::{Clutter, ExtNat, MemberSet, SetSystem};

pub fn ext(v: Option<usize>) -> ExtNat {
    v.map_or(ExtNat::Infinity, |k| ExtNat::Finite(k as u64))
}

pub fn raw(c: &Clutter) -> (usize, Vec<u64>) {
    (c.ground_size(), c.members().iter().map(|m| m.bits()).collect())
}

pub fn clutter(n: usize, members: &[u64]) -> Clutter {
    Clutter::minimal_sets(n, members.iter().map(|&b| MemberSet::from_bits(b)))
}

fn pop(x: u64) -> usize {
    x.count_ones() as usize
}

pub fn minimal(sets: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = sets
        .iter()
        .copied()
        .filter(|&s| !sets.iter().any(|&t| t != s && t & s == t))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn is_cover(members: &[u64], b: u64) -> bool {
    members.iter().all(|&m| m & b != 0)
}

/// Every cover among the `2^n` subsets.
pub fn covers(n: usize, members: &[u64]) -> Vec<u64> {
    (0..1u64 << n).filter(|&b| is_cover(members, b)).collect()
}

pub fn blocker(n: usize, members: &[u64]) -> Vec<u64> {
    minimal(&covers(n, members))
}

pub fn same_clutter(c: &Clutter, n: usize, members: &[u64]) -> bool {
    let mut mine = minimal(members);
    mine.sort_unstable();
    let mut theirs: Vec<u64> = c.members().iter().map(|m| m.bits()).collect();
    theirs.sort_unstable();
    c.ground_size() == n && mine == theirs
}

pub fn tau(n: usize, members: &[u64]) -> Option<usize> {
    covers(n, members).into_iter().map(pop).min()
}

/// Drops the elements of `removed` from `m` and closes up the gaps.
pub fn squeeze(n: usize, m: u64, removed: u64) -> u64 {
    (0..n)
        .filter(|i| removed >> i & 1 == 0)
        .enumerate()
        .fold(0u64, |acc, (k, i)| acc | ((m >> i) & 1) << k)
}

/// `C \ I / J` relabelled onto `1..` in increasing order of kept elements.
pub fn minor(n: usize, members: &[u64], delete: u64, contract: u64) -> (usize, Vec<u64>) {
    let removed = delete | contract;
    let sets: Vec<u64> = members
        .iter()
        .filter(|&&m| m & delete == 0)
        .map(|&m| squeeze(n, m & !contract, removed))
        .collect();
    (n - removed.count_ones() as usize, minimal(&sets))
}

pub fn is_delta(n: usize, members: &[u64]) -> bool {
    if n < 3 || members.len() != n {
        return false;
    }
    let full = (1u64 << n) - 1;
    (0..n).any(|hub| {
        let mut want: Vec<u64> = (0..n).filter(|&v| v != hub).map(|v| 1 << hub | 1 << v).collect();
        want.push(full & !(1 << hub));
        want.sort_unstable();
        let mut have = members.to_vec();
        have.sort_unstable();
        want == have
    })
}

/// Minimum members are the edges of one odd cycle through all `n >= 5` elements.
pub fn is_extended_odd_hole(n: usize, members: &[u64]) -> bool {
    if n < 5 || n % 2 == 0 || members.iter().map(|&m| pop(m)).min() != Some(2) {
        return false;
    }
    let edges: Vec<u64> = members.iter().copied().filter(|&m| pop(m) == 2).collect();
    if edges.len() != n {
        return false;
    }
    // try every cyclic order starting at 0; n <= 9 here
    let mut order = vec![0usize];
    fn extend(order: &mut Vec<usize>, n: usize, edges: &[u64]) -> bool {
        let last = *order.last().unwrap();
        if order.len() == n {
            return edges.contains(&(1 << last | 1 << order[0]));
        }
        for v in 0..n {
            if !order.contains(&v) && edges.contains(&(1 << last | 1 << v)) {
                order.push(v);
                if extend(order, n, edges) {
                    return true;
                }
                order.pop();
            }
        }
        false
    }
    extend(&mut order, n, &edges)
}

pub fn is_obstruction(n: usize, members: &[u64]) -> bool {
    is_delta(n, members) || is_extended_odd_hole(n, &blocker(n, members))
}

/// Every minor over all `3^n` specs.
pub fn is_clean(n: usize, members: &[u64]) -> bool {
    let mut code = vec![0u8; n];
    loop {
        let (mut del, mut con) = (0u64, 0u64);
        for (i, &c) in code.iter().enumerate() {
            match c {
                1 => del |= 1 << i,
                2 => con |= 1 << i,
                _ => {}
            }
        }
        let (m, sets) = minor(n, members, del, con);
        if is_obstruction(m, &sets) {
            return false;
        }
        let mut k = 0;
        loop {
            if k == n {
                return true;
            }
            code[k] += 1;
            if code[k] < 3 {
                break;
            }
            code[k] = 0;
            k += 1;
        }
    }
}

/// Everything about a tangled clutter, each piece by exhaustive search.
#[derive(Debug, Clone)]
pub struct Tangle {
    pub n: usize,
    pub members: Vec<u64>,
    pub edges: Vec<u64>,
    /// Components sorted by smallest element.
    pub comps: Vec<u64>,
    /// Proper 2-colourings, each given by one colour class.
    pub colourings: Vec<u64>,
    /// The colour class holding the smallest element of every component.
    pub canonical: u64,
    pub core: Vec<u64>,
    pub setcore: Vec<u64>,
}

pub fn is_tangled(n: usize, members: &[u64]) -> bool {
    let cs = covers(n, members);
    if cs.iter().map(|&b| pop(b)).min() != Some(2) {
        return false;
    }
    let pairs = cs.iter().filter(|&&b| pop(b) == 2).fold(0u64, |acc, &b| acc | b);
    pairs == (1u64 << n) - 1
}

pub fn tangle(n: usize, members: &[u64]) -> Option<Tangle> {
    if !is_tangled(n, members) {
        return None;
    }
    let edges: Vec<u64> = covers(n, members).into_iter().filter(|&b| pop(b) == 2).collect();
    // components by repeated closure
    let mut comps = Vec::new();
    let mut seen = 0u64;
    for v in 0..n {
        if seen >> v & 1 == 1 {
            continue;
        }
        let mut comp = 1u64 << v;
        loop {
            let grown = edges.iter().filter(|&&e| e & comp != 0).fold(comp, |acc, &e| acc | e);
            if grown == comp {
                break;
            }
            comp = grown;
        }
        seen |= comp;
        comps.push(comp);
    }
    let colourings: Vec<u64> = (0..1u64 << n)
        .filter(|&x| edges.iter().all(|&e| pop(e & x) == 1))
        .collect();
    let firsts = comps.iter().fold(0u64, |acc, &k| acc | (k & k.wrapping_neg()));
    let canonical = *colourings.iter().find(|&&x| x & firsts == firsts)?;
    let min_covers: Vec<u64> = edges.clone();
    let core: Vec<u64> = {
        let mut k: Vec<u64> = members
            .iter()
            .copied()
            .filter(|&m| min_covers.iter().all(|&b| pop(m & b) == 1))
            .collect();
        k.sort_unstable();
        k
    };
    let mut setcore: Vec<u64> = core
        .iter()
        .map(|&m| {
            comps.iter().enumerate().fold(0u64, |acc, (i, &k)| {
                let u = k & canonical;
                acc | ((m & k != u) as u64) << i
            })
        })
        .collect();
    setcore.sort_unstable();
    setcore.dedup();
    Some(Tangle {
        n,
        members: members.to_vec(),
        edges,
        comps,
        colourings,
        canonical,
        core,
        setcore,
    })
}

impl Tangle {
    pub fn d(&self) -> usize {
        self.comps.len()
    }

    fn comps_met(&self, b: u64) -> usize {
        self.comps.iter().filter(|&&k| k & b != 0).count()
    }

    fn monochromatic(&self, b: u64) -> bool {
        self.colourings.iter().any(|&x| b & x == b)
    }

    pub fn is_rainbow(&self, b: u64) -> bool {
        is_cover(&self.members, b) && self.comps.iter().all(|&k| pop(k & b) <= 1)
    }

    pub fn mu(&self) -> Option<usize> {
        (0..1u64 << self.n).filter(|&b| self.is_rainbow(b)).map(pop).min()
    }

    pub fn mu1(&self) -> Option<usize> {
        (0..1u64 << self.n)
            .filter(|&b| is_cover(&self.core, b) && self.monochromatic(b))
            .map(pop)
            .min()
    }

    pub fn mu2(&self) -> Option<usize> {
        (0..1u64 << self.n)
            .filter(|&b| is_cover(&self.members, b) && self.monochromatic(b))
            .map(|b| self.comps_met(b))
            .min()
    }

    /// Whole-side covers `X ∩ (union of chosen components)` that stop being
    /// covers when any one chosen component switches side.
    pub fn irreducible_covers(&self) -> Vec<(u64, usize)> {
        let d = self.d();
        let mut out = Vec::new();
        for &x in &self.colourings {
            for chosen in 0..1u64 << d {
                let union = (0..d)
                    .filter(|i| chosen >> i & 1 == 1)
                    .fold(0u64, |acc, i| acc | (self.comps[i] & x));
                if !is_cover(&self.members, union) {
                    continue;
                }
                let irreducible = (0..d).filter(|i| chosen >> i & 1 == 1).all(|j| {
                    let k = self.comps[j];
                    !is_cover(&self.members, (union & !k) | (k & !x))
                });
                if irreducible {
                    out.push((union, pop(chosen)));
                }
            }
        }
        out
    }

    pub fn mu3(&self) -> Option<usize> {
        self.irreducible_covers().into_iter().map(|(_, k)| k).min()
    }

    pub fn lambda(&self) -> Option<usize> {
        lambda(self.d(), &self.setcore)
    }

    pub fn setcore_system(&self) -> SetSystem {
        SetSystem::new(self.d(), self.setcore.iter().map(|&p| MemberSet::from_bits(p)).collect()).unwrap()
    }
}

/// Unpruned: every disjoint `(I, J)` over `[d]`; the inequality on `I, J` is
/// violated by a point that is 0 on `I` and 1 on `J`.
pub fn lambda(d: usize, points: &[u64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i_set in 0..1u64 << d {
        let mut j_set = 0u64;
        let rest = !i_set & ((1u64 << d) - 1);
        // all subsets of the complement, including the empty one
        loop {
            let valid = !points.iter().any(|&p| p & i_set == 0 && p & j_set == j_set);
            if valid {
                let k = pop(i_set) + pop(j_set);
                best = Some(best.map_or(k, |b| b.min(k)));
            }
            if j_set == rest {
                break;
            }
            j_set = (j_set.wrapping_sub(rest)) & rest;
        }
    }
    best
}

/// Affine rank by fraction-free elimination over `i128`.
pub fn affine_rank(d: usize, points: &[u64]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0];
    let mut rows: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|&p| (0..d).map(|i| ((p >> i) & 1) as i128 - ((base >> i) & 1) as i128).collect())
        .collect();
    let mut rank = 0;
    for col in 0..d {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let (a, b) = (rows[rank][col], rows[r][col]);
                for c in 0..d {
                    rows[r][c] = rows[r][c] * a - rows[rank][c] * b;
                }
                let g = rows[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    rows[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Random relabelling from a caller-supplied permutation of `0..n`.
pub fn permute(members: &[u64], perm: &[usize]) -> Vec<u64> {
    members
        .iter()
        .map(|&m| {
            perm.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .fold(0u64, |acc, (_, &p)| acc | 1 << p)
        })
        .collect()
}

/// `b` as 1-based elements, for messages.
pub fn show(b: u64) -> String {
    MemberSet::from_bits(b).to_string()
}
