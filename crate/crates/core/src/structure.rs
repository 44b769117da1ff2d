//! Tangled clutters: the minimum-cover graph, core and setcore.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::clutter::{Clutter, ClutterError, ExtNat, MemberSet, Minor, MinorSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("the clutter is not tangled")]
    NotTangled,
    #[error("the minimum-cover graph is not bipartite; odd closed walk {odd_walk:?}")]
    NotBipartite { odd_walk: Vec<usize> },
    #[error("the minimum-cover graph is connected")]
    GraphConnected,
    #[error("component index {index} out of range for {count} components")]
    NoSuchComponent { index: usize, count: usize },
    #[error("the set-system is empty")]
    EmptySetSystem,
    #[error("point has coordinates beyond dimension {0}")]
    PointOutOfRange(usize),
    #[error("duplicate point")]
    DuplicatePoint,
    #[error("core members {0} and {1} map to the same point")]
    SetcoreNotInjective(MemberSet, MemberSet),
    #[error(transparent)]
    Clutter(#[from] ClutterError),
}

/// One side of a component bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    U,
    V,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::U => Side::V,
            Side::V => Side::U,
        }
    }
}

/// A connected component of `G(C)` with its bipartition `(U, V)`; `U` holds
/// the smallest vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Component {
    pub u: MemberSet,
    pub v: MemberSet,
}

impl Component {
    pub fn vertices(&self) -> MemberSet {
        self.u.union(self.v)
    }

    pub fn side(&self, side: Side) -> MemberSet {
        match side {
            Side::U => self.u,
            Side::V => self.v,
        }
    }
}

/// `G(C)`: vertices are the ground set, edges the minimum covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinCoverGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    /// Ordered by smallest vertex.
    pub components: Vec<Component>,
}

impl MinCoverGraph {
    pub fn d(&self) -> usize {
        self.components.len()
    }

    /// Index of the component containing `vertex`.
    pub fn component_of(&self, vertex: usize) -> Option<usize> {
        self.components.iter().position(|c| c.vertices().contains(vertex))
    }

    /// Builds the graph from explicit edges, 2-colouring each component by BFS.
    pub fn from_edges(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<MinCoverGraph, StructureError> {
        let mut adj = vec![Vec::new(); vertex_count + 1];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut colour: Vec<Option<bool>> = vec![None; vertex_count + 1];
        let mut parent = vec![0usize; vertex_count + 1];
        let mut components = Vec::new();
        for root in 1..=vertex_count {
            if colour[root].is_some() {
                continue;
            }
            colour[root] = Some(false);
            parent[root] = root;
            let mut comp = Component {
                u: MemberSet::EMPTY,
                v: MemberSet::EMPTY,
            };
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                let cx = colour[x].unwrap();
                if cx {
                    comp.v = comp.v.with(x);
                } else {
                    comp.u = comp.u.with(x);
                }
                for &y in &adj[x] {
                    match colour[y] {
                        None => {
                            colour[y] = Some(!cx);
                            parent[y] = x;
                            queue.push_back(y);
                        }
                        Some(cy) if cy == cx => {
                            return Err(StructureError::NotBipartite {
                                odd_walk: odd_walk(&parent, x, y),
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
            components.push(comp);
        }
        Ok(MinCoverGraph {
            vertex_count,
            edges,
            components,
        })
    }
}

/// Closed walk root -> x, x -> y, y -> root through the BFS tree. `x` and `y`
/// have the same colour, so the walk has odd length.
fn odd_walk(parent: &[usize], x: usize, y: usize) -> Vec<usize> {
    let path_to_root = |mut v: usize| {
        let mut p = vec![v];
        while parent[v] != v {
            v = parent[v];
            p.push(v);
        }
        p
    };
    let mut walk = path_to_root(x);
    walk.reverse();
    walk.extend(path_to_root(y));
    walk
}

/// A set of distinct 0/1 points in dimension `d`; coordinate `i` of a point is
/// bit `i` (1-based) of its [`MemberSet`]. Points are kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetSystem {
    dimension: usize,
    points: Vec<MemberSet>,
}

impl SetSystem {
    pub fn new(dimension: usize, mut points: Vec<MemberSet>) -> Result<SetSystem, StructureError> {
        if dimension > crate::clutter::MAX_GROUND {
            return Err(StructureError::PointOutOfRange(dimension));
        }
        let full = MemberSet::full(dimension);
        if points.iter().any(|p| !p.is_subset(full)) {
            return Err(StructureError::PointOutOfRange(dimension));
        }
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(StructureError::DuplicatePoint);
        }
        Ok(SetSystem { dimension, points })
    }

    /// `{0,1}^d`.
    pub fn cube(dimension: usize) -> SetSystem {
        assert!(dimension < 32, "cube too large to list");
        let points = (0..1u64 << dimension).map(MemberSet::from_bits).collect();
        SetSystem::new(dimension, points).expect("cube points are distinct")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[MemberSet] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: MemberSet) -> bool {
        self.points.binary_search(&point).is_ok()
    }

    pub fn is_full_cube(&self) -> bool {
        self.dimension < 64 && self.points.len() as u64 == 1u64 << self.dimension
    }

    /// Complements every point.
    pub fn complemented(&self) -> SetSystem {
        let full = MemberSet::full(self.dimension);
        SetSystem::new(self.dimension, self.points.iter().map(|p| full.difference(*p)).collect())
            .expect("complement is injective")
    }
}

impl Serialize for SetSystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SetSystem", 2)?;
        st.serialize_field("dimension", &self.dimension)?;
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|p| crate::text::format_point(*p, self.dimension))
            .collect();
        st.serialize_field("points", &pts)?;
        st.end()
    }
}

/// `tau = 2` and every element lies in a cover of size two.
pub fn is_tangled(c: &Clutter) -> bool {
    if c.covering_number() != ExtNat::Finite(2) {
        return false;
    }
    let covers = c.minimum_covers().expect("tau is finite");
    let used = covers.iter().fold(MemberSet::EMPTY, |acc, b| acc.union(*b));
    used == c.ground()
}

pub fn min_cover_graph(c: &Clutter) -> Result<MinCoverGraph, StructureError> {
    if !is_tangled(c) {
        return Err(StructureError::NotTangled);
    }
    let edges = c
        .minimum_covers()?
        .into_iter()
        .map(|b| {
            let mut it = b.iter();
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    MinCoverGraph::from_edges(c.ground_size(), edges)
}

/// Members meeting every minimum cover exactly once.
pub fn core(c: &Clutter) -> Result<Vec<MemberSet>, StructureError> {
    if !is_tangled(c) {
        return Err(StructureError::NotTangled);
    }
    let covers = c.minimum_covers()?;
    Ok(c.members()
        .iter()
        .copied()
        .filter(|m| covers.iter().all(|b| m.intersection(*b).len() == 1))
        .collect())
}

/// Members whose trace on every component is one whole side.
pub fn core_by_component_formula(c: &Clutter, g: &MinCoverGraph) -> Result<Vec<MemberSet>, StructureError> {
    if !is_tangled(c) {
        return Err(StructureError::NotTangled);
    }
    Ok(c.members()
        .iter()
        .copied()
        .filter(|m| {
            g.components.iter().all(|comp| {
                let trace = m.intersection(comp.vertices());
                trace == comp.u || trace == comp.v
            })
        })
        .collect())
}

/// The point of a member: coordinate `i` is 0 exactly when the member's trace
/// on component `i` is `U_i`.
pub fn point_of(member: MemberSet, g: &MinCoverGraph) -> MemberSet {
    let mut p = MemberSet::EMPTY;
    for (i, comp) in g.components.iter().enumerate() {
        if member.intersection(comp.vertices()) != comp.u {
            p = p.with(i + 1);
        }
    }
    p
}

/// The member a point stands for: the union of the chosen sides.
pub fn member_of(point: MemberSet, g: &MinCoverGraph) -> MemberSet {
    g.components
        .iter()
        .enumerate()
        .fold(MemberSet::EMPTY, |acc, (i, comp)| {
            acc.union(if point.contains(i + 1) { comp.v } else { comp.u })
        })
}

pub fn setcore(c: &Clutter) -> Result<SetSystem, StructureError> {
    let g = min_cover_graph(c)?;
    setcore_with(c, &g)
}

/// Setcore under the canonical orientation of an already built graph.
pub fn setcore_with(c: &Clutter, g: &MinCoverGraph) -> Result<SetSystem, StructureError> {
    let members = core(c)?;
    let mut pairs: Vec<(MemberSet, MemberSet)> = members.iter().map(|&m| (point_of(m, g), m)).collect();
    pairs.sort();
    if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(StructureError::SetcoreNotInjective(w[0].1, w[1].1));
    }
    SetSystem::new(g.d(), pairs.into_iter().map(|(p, _)| p).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeometryReport {
    pub nonempty: bool,
    pub no_duplicated_coordinates: bool,
    /// Informational: coordinate pairs that are complements of each other on
    /// every point.
    pub complementary_coordinates: Vec<(usize, usize)>,
    pub affine_rank: usize,
    pub full_dimensional: bool,
    pub lambda: ExtNat,
    pub lambda_at_least_3: bool,
}

impl GeometryReport {
    pub fn passes(&self) -> bool {
        self.nonempty && self.no_duplicated_coordinates && self.full_dimensional && self.lambda_at_least_3
    }
}

pub fn check_setcore_geometry(s: &SetSystem) -> Result<GeometryReport, StructureError> {
    if s.is_empty() {
        return Err(StructureError::EmptySetSystem);
    }
    let d = s.dimension();
    let column = |i: usize| -> Vec<bool> { s.points().iter().map(|p| p.contains(i)).collect() };
    let columns: Vec<Vec<bool>> = (1..=d).map(column).collect();
    let mut duplicated = false;
    let mut complementary = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            if columns[i] == columns[j] {
                duplicated = true;
            }
            if columns[i].iter().zip(&columns[j]).all(|(a, b)| a != b) {
                complementary.push((i + 1, j + 1));
            }
        }
    }
    let affine_rank = affine_rank(s);
    let (lambda, _) = crate::params::connectivity(s);
    Ok(GeometryReport {
        nonempty: true,
        no_duplicated_coordinates: !duplicated,
        complementary_coordinates: complementary,
        affine_rank,
        full_dimensional: affine_rank == d,
        lambda,
        lambda_at_least_3: d < 3 || lambda >= ExtNat::Finite(3),
    })
}

/// Rank of `{p - p_0}` over the rationals, by Gaussian elimination.
pub fn affine_rank(s: &SetSystem) -> usize {
    let Some((&base, rest)) = s.points().split_first() else {
        return 0;
    };
    let d = s.dimension();
    let coord = |p: MemberSet, i: usize| -> i64 { p.contains(i + 1) as i64 };
    let rows: Vec<Vec<BigRational>> = rest
        .iter()
        .map(|&p| {
            (0..d)
                .map(|i| BigRational::from_integer(BigInt::from(coord(p, i) - coord(base, i))))
                .collect()
        })
        .collect();
    rational_rank(rows, d)
}

pub fn rational_rank(mut rows: Vec<Vec<BigRational>>, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone() * inv.clone();
                for k in col..cols {
                    let delta = factor.clone() * rows[rank][k].clone();
                    rows[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `C \ U / U'` for component `component` (0-based): the side `kept` is
/// contracted and the other side deleted.
pub fn side_minor(c: &Clutter, g: &MinCoverGraph, component: usize, kept: Side) -> Result<Minor, StructureError> {
    if g.d() < 2 {
        return Err(StructureError::GraphConnected);
    }
    let comp = g
        .components
        .get(component)
        .ok_or(StructureError::NoSuchComponent {
            index: component,
            count: g.d(),
        })?;
    let spec = MinorSpec::new(comp.side(kept.flip()), comp.side(kept));
    Ok(c.minor(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{make_family, Family};

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

    fn points(d: usize, pts: &[&str]) -> SetSystem {
        let pts = pts
            .iter()
            .map(|p| p.chars().enumerate().filter(|(_, ch)| *ch == '1').map(|(i, _)| i + 1).collect())
            .collect();
        SetSystem::new(d, pts).unwrap()
    }

    #[test]
    fn tangled_examples() {
        assert!(is_tangled(&two()));
        assert!(!is_tangled(&c(1, &[&[1]])));
        assert!(is_tangled(&c(3, &[&[1, 2], &[1, 3], &[2, 3]])));
        // tau = 2 but element 3 is in no minimum cover
        assert!(!is_tangled(&c(3, &[&[1], &[2]])));
    }

    #[test]
    fn graph_examples() {
        let g = min_cover_graph(&two()).unwrap();
        assert_eq!(g.edges, vec![(1, 2)]);
        assert_eq!(g.components, vec![Component { u: set(&[1]), v: set(&[2]) }]);

        let g = min_cover_graph(&c4()).unwrap();
        assert_eq!(
            g.components,
            vec![
                Component { u: set(&[1]), v: set(&[3]) },
                Component { u: set(&[2]), v: set(&[4]) }
            ]
        );

        match min_cover_graph(&c(3, &[&[1, 2], &[1, 3], &[2, 3]])) {
            Err(StructureError::NotBipartite { odd_walk }) => {
                assert_eq!(odd_walk.first(), odd_walk.last());
                assert_eq!((odd_walk.len() - 1) % 2, 1);
            }
            other => panic!("expected NotBipartite, got {other:?}"),
        }
        assert_eq!(min_cover_graph(&c(1, &[&[1]])), Err(StructureError::NotTangled));
    }

    #[test]
    fn core_examples() {
        assert_eq!(core(&two()).unwrap(), two().members());
        assert_eq!(core(&c4()).unwrap(), c4().members());
        assert_eq!(core(&f6()).unwrap(), f6().members());
        let g = min_cover_graph(&f6()).unwrap();
        assert_eq!(core_by_component_formula(&f6(), &g).unwrap(), f6().members());
        assert_eq!(core(&c(1, &[&[1]])), Err(StructureError::NotTangled));
    }

    #[test]
    fn setcore_examples() {
        assert_eq!(setcore(&two()).unwrap(), SetSystem::cube(1));
        assert_eq!(setcore(&c4()).unwrap(), SetSystem::cube(2));
        let expected = points(3, &["001", "010", "100", "011", "101", "110"]);
        assert_eq!(setcore(&f6()).unwrap(), expected);
    }

    #[test]
    fn geometry_examples() {
        let rep = check_setcore_geometry(&setcore(&f6()).unwrap()).unwrap();
        assert!(rep.passes());
        assert_eq!(rep.affine_rank, 3);
        assert_eq!(rep.lambda, ExtNat::Finite(3));

        let rep = check_setcore_geometry(&SetSystem::cube(2)).unwrap();
        assert!(rep.passes());
        assert_eq!(rep.lambda, ExtNat::Infinity);

        let rep = check_setcore_geometry(&points(2, &["00", "11"])).unwrap();
        assert!(!rep.full_dimensional);
        assert_eq!(rep.affine_rank, 1);
        assert!(!rep.no_duplicated_coordinates);

        let rep = check_setcore_geometry(&points(2, &["01", "10"])).unwrap();
        assert_eq!(rep.complementary_coordinates, vec![(1, 2)]);

        assert_eq!(
            check_setcore_geometry(&points(2, &[])),
            Err(StructureError::EmptySetSystem)
        );
    }

    #[test]
    fn side_minor_examples() {
        let g = min_cover_graph(&f6()).unwrap();
        let m = side_minor(&f6(), &g, 0, Side::U).unwrap();
        // {4,6},{4,5},{3,6} over {3,4,5,6}
        assert_eq!(m.origin, vec![3, 4, 5, 6]);
        assert_eq!(m.clutter, c(4, &[&[2, 4], &[2, 3], &[1, 4]]));

        let g = min_cover_graph(&c4()).unwrap();
        let m = side_minor(&c4(), &g, 0, Side::U).unwrap();
        assert_eq!(m.origin, vec![2, 4]);
        assert_eq!(m.clutter, two());

        let g = min_cover_graph(&two()).unwrap();
        assert_eq!(side_minor(&two(), &g, 0, Side::U), Err(StructureError::GraphConnected));
    }

    #[test]
    fn rational_rank_handles_dependencies() {
        let s = points(3, &["000", "110", "011", "101"]);
        assert_eq!(affine_rank(&s), 3);
        let s = points(3, &["000", "110", "011", "101", "111"]);
        assert_eq!(affine_rank(&s), 3);
        let s = points(3, &["100", "010", "001"]);
        assert_eq!(affine_rank(&s), 2);
    }
}
