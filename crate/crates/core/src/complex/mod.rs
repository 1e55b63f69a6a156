//! Combinatorial Σ-complexes.
//!
//! Facets are parallelograms anchored at integer star coordinates. Periodic
//! complexes store one representative per lattice orbit; every incidence
//! query works on representatives reduced modulo the lattice.

mod catalog;
mod euler;
mod lift;
mod moves;
mod vertex;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Coord4, LatticeError, PeriodLattice};

pub use catalog::{canonical_signature, enumerate_vertex_types, figure_of, vertex_type_by_name, VertexType, VertexTypeName};
pub use euler::{vertex_curvature, EulerReport};
pub use lift::{lift_geometry, RawMesh};
pub use moves::Symmetry;
pub use vertex::{CornerClass, Link, SignedDir, VertexCensus};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("facet type ({0},{1}) is forbidden")]
    ForbiddenFacet(u8, u8),
    #[error("invalid facet type ({0},{1})")]
    BadType(u8, u8),
    #[error("complex has no facets")]
    Empty,
    #[error("complex splits into {0} components")]
    Disconnected(usize),
    #[error("facet {0} is already present")]
    Duplicate(Facet),
    #[error("bad period lattice: {0}")]
    BadLattice(#[from] LatticeError),
    #[error("edge {0} would belong to more than two facets")]
    NonManifoldEdge(Edge),
    #[error("facet {0} shares no edge with the complex")]
    NotAttached(Facet),
    #[error("edge {0} is not a boundary edge")]
    NotBoundaryEdge(Edge),
    #[error("vertex {0} is not a manifold point")]
    NotManifold(Coord4),
    #[error("vertex {0} lies on the boundary")]
    BoundaryVertex(Coord4),
    #[error("vertex {0} is not a vertex of the complex")]
    NoSuchVertex(Coord4),
    #[error("vertex figure {0:?} is not in the catalog")]
    Unrecognized(Vec<i8>),
    #[error("complex has boundary modulo the lattice")]
    NotClosed,
    #[error("vector {0} is not a period of the complex")]
    NotSublattice(Coord4),
    #[error("surface is not orientable")]
    NonOrientable,
    #[error("side {side} of face {face} matches no star vector")]
    EdgeUnmatched { face: usize, side: usize },
    #[error("face {0} is not a parallelogram")]
    NonParallelogramFace(usize),
    #[error("labels conflict around mesh vertex {vertex}: the loop is not generically closed")]
    NonGeneric { vertex: usize, loop_vertices: Vec<usize> },
    #[error("mesh is empty or disconnected")]
    BadMesh,
}

/// An admissible facet type `(i,j)` with `i<j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetType {
    i: u8,
    j: u8,
}

impl FacetType {
    pub const T13: FacetType = FacetType { i: 1, j: 3 };
    pub const T14: FacetType = FacetType { i: 1, j: 4 };
    pub const T23: FacetType = FacetType { i: 2, j: 3 };
    pub const T24: FacetType = FacetType { i: 2, j: 4 };
    pub const ADMISSIBLE: [FacetType; 4] = [Self::T13, Self::T14, Self::T23, Self::T24];

    /// Accepts the indices in either order.
    pub fn new(a: u8, b: u8) -> Result<Self, ComplexError> {
        let (i, j) = if a <= b { (a, b) } else { (b, a) };
        if i < 1 || j > 4 || i == j {
            return Err(ComplexError::BadType(a, b));
        }
        if (i, j) == (1, 2) || (i, j) == (3, 4) {
            return Err(ComplexError::ForbiddenFacet(i, j));
        }
        Ok(FacetType { i, j })
    }

    pub fn i(self) -> usize {
        self.i as usize
    }

    pub fn j(self) -> usize {
        self.j as usize
    }

    pub fn pair(self) -> [u8; 2] {
        [self.i, self.j]
    }

    pub fn contains(self, k: usize) -> bool {
        self.i() == k || self.j() == k
    }

    /// The two admissible types using star index `k`.
    pub fn with_index(k: usize) -> [FacetType; 2] {
        match k {
            1 => [Self::T13, Self::T14],
            2 => [Self::T23, Self::T24],
            3 => [Self::T13, Self::T23],
            4 => [Self::T14, Self::T24],
            _ => panic!("star index {k} out of range"),
        }
    }
}

impl fmt::Display for FacetType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Π{}{}", self.i, self.j)
    }
}

impl Serialize for FacetType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.pair().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FacetType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b] = <[u8; 2]>::deserialize(d)?;
        FacetType::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// A parallelogram with corners `a, a+e_i, a+e_i+e_j, a+e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub anchor: Coord4,
    #[serde(rename = "type")]
    pub ftype: FacetType,
}

impl Facet {
    pub fn new(anchor: impl Into<Coord4>, ftype: FacetType) -> Self {
        Facet { anchor: anchor.into(), ftype }
    }

    pub fn corners(&self) -> [Coord4; 4] {
        let a = self.anchor;
        let ei = Coord4::unit(self.ftype.i());
        let ej = Coord4::unit(self.ftype.j());
        [a, a + ei, a + ei + ej, a + ej]
    }

    /// Boundary edges in the order `(a,i), (a+e_i,j), (a+e_j,i), (a,j)`.
    pub fn edges(&self) -> [Edge; 4] {
        let (i, j) = (self.ftype.i(), self.ftype.j());
        let a = self.anchor;
        [
            Edge::new(a, i),
            Edge::new(a + Coord4::unit(i), j),
            Edge::new(a + Coord4::unit(j), i),
            Edge::new(a, j),
        ]
    }

    pub fn translated(&self, by: Coord4) -> Facet {
        Facet { anchor: self.anchor + by, ftype: self.ftype }
    }

    /// Point reflection through the origin, `p -> -p`.
    pub fn inverted(&self) -> Facet {
        let [_, _, far, _] = self.corners();
        Facet { anchor: -far, ftype: self.ftype }
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.ftype, self.anchor)
    }
}

/// The segment from `tail` to `tail + e_dir`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub tail: Coord4,
    pub dir: u8,
}

impl Edge {
    pub fn new(tail: Coord4, dir: usize) -> Self {
        assert!((1..=4).contains(&dir));
        Edge { tail, dir: dir as u8 }
    }

    pub fn head(&self) -> Coord4 {
        self.tail + Coord4::unit(self.dir as usize)
    }

    pub fn translated(&self, by: Coord4) -> Edge {
        Edge { tail: self.tail + by, dir: self.dir }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+e{}", self.tail, self.dir)
    }
}

/// Metric conditions a realization must satisfy for the complex to fold
/// congruently, introduced by mirroring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Requirement {
    #[serde(rename = "r1=r2")]
    R1EqR2,
    #[serde(rename = "r3=r4")]
    R3EqR4,
}

impl Requirement {
    pub fn holds(self, r: [f64; 4]) -> bool {
        let eq = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        match self {
            Requirement::R1EqR2 => eq(r[0], r[1]),
            Requirement::R3EqR4 => eq(r[2], r[3]),
        }
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Requirement::R1EqR2 => "r1=r2",
            Requirement::R3EqR4 => "r3=r4",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PolyhedronReport {
    pub ok: bool,
    /// Edges with more than two incident facets.
    pub bad_edges: Vec<Edge>,
    /// Vertices whose incident facets form neither one cycle nor one path.
    pub bad_vertices: Vec<Coord4>,
}

/// One occurrence of an edge: the facet representative, which of its four
/// edges, and the translation taking the reduced edge to the facet's edge.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EdgeUse {
    pub facet: Facet,
    pub index: usize,
    pub shift: Coord4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaComplex {
    facets: BTreeSet<Facet>,
    lattice: PeriodLattice,
    requirements: BTreeSet<Requirement>,
}

impl SigmaComplex {
    /// Builds a complex, silently dropping duplicate facets.
    pub fn new(facets: impl IntoIterator<Item = Facet>, periods: &[Coord4]) -> Result<Self, ComplexError> {
        Self::build(facets, periods).map(|(c, _)| c)
    }

    /// Builds a complex and also returns the facets that were dropped as
    /// duplicates of earlier ones (after reduction modulo the periods).
    pub fn build(facets: impl IntoIterator<Item = Facet>, periods: &[Coord4]) -> Result<(Self, Vec<Facet>), ComplexError> {
        let lattice = PeriodLattice::new(periods)?;
        let mut set = BTreeSet::new();
        let mut dups = Vec::new();
        for f in facets {
            let r = reduce_facet(&lattice, f);
            if !set.insert(r) {
                dups.push(f);
            }
        }
        if set.is_empty() {
            return Err(ComplexError::Empty);
        }
        let c = SigmaComplex { facets: set, lattice, requirements: BTreeSet::new() };
        let parts = c.components();
        if parts > 1 {
            return Err(ComplexError::Disconnected(parts));
        }
        Ok((c, dups))
    }

    pub(crate) fn from_parts_unchecked(facets: BTreeSet<Facet>, lattice: PeriodLattice, requirements: BTreeSet<Requirement>) -> Self {
        SigmaComplex { facets, lattice, requirements }
    }

    pub fn with_requirements(mut self, reqs: impl IntoIterator<Item = Requirement>) -> Self {
        self.requirements.extend(reqs);
        self
    }

    pub fn facets(&self) -> impl ExactSizeIterator<Item = &Facet> + Clone {
        self.facets.iter()
    }

    pub fn facet_set(&self) -> &BTreeSet<Facet> {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains(&self, f: &Facet) -> bool {
        self.facets.contains(&reduce_facet(&self.lattice, *f))
    }

    pub fn lattice(&self) -> &PeriodLattice {
        &self.lattice
    }

    pub fn periods(&self) -> &[Coord4] {
        self.lattice.generators()
    }

    pub fn is_periodic(&self) -> bool {
        !self.lattice.is_trivial()
    }

    pub fn requirements(&self) -> &BTreeSet<Requirement> {
        &self.requirements
    }

    pub fn reduce(&self, c: Coord4) -> Coord4 {
        self.lattice.reduce(c)
    }

    pub fn reduce_edge(&self, e: Edge) -> Edge {
        Edge { tail: self.lattice.reduce(e.tail), dir: e.dir }
    }

    /// Count of facets of each type.
    pub fn census(&self) -> BTreeMap<FacetType, usize> {
        let mut m = BTreeMap::new();
        for f in &self.facets {
            *m.entry(f.ftype).or_insert(0) += 1;
        }
        m
    }

    /// Edge incidence counts, modulo the lattice.
    pub fn edges(&self) -> BTreeMap<Edge, usize> {
        let mut m = BTreeMap::new();
        for f in &self.facets {
            for e in f.edges() {
                *m.entry(self.reduce_edge(e)).or_insert(0) += 1;
            }
        }
        m
    }

    pub(crate) fn edge_uses(&self) -> HashMap<Edge, Vec<EdgeUse>> {
        let mut m: HashMap<Edge, Vec<EdgeUse>> = HashMap::new();
        for f in &self.facets {
            for (index, e) in f.edges().into_iter().enumerate() {
                let r = self.reduce_edge(e);
                m.entry(r).or_default().push(EdgeUse { facet: *f, index, shift: e.tail - r.tail });
            }
        }
        m
    }

    /// Distinct vertices, modulo the lattice.
    pub fn vertices(&self) -> BTreeSet<Coord4> {
        self.facets.iter().flat_map(|f| f.corners()).map(|c| self.reduce(c)).collect()
    }

    pub fn translated(&self, by: Coord4) -> SigmaComplex {
        let facets = self.facets.iter().map(|f| reduce_facet(&self.lattice, f.translated(by))).collect();
        SigmaComplex { facets, lattice: self.lattice.clone(), requirements: self.requirements.clone() }
    }

    /// Point reflection `p -> -p`; always congruent, so no requirements are
    /// added.
    pub fn inverted(&self) -> SigmaComplex {
        let facets = self.facets.iter().map(|f| reduce_facet(&self.lattice, f.inverted())).collect();
        SigmaComplex { facets, lattice: self.lattice.clone(), requirements: self.requirements.clone() }
    }

    /// Union of two complexes sharing the same lattice. Fails if the result
    /// is disconnected.
    pub fn union(&self, other: &SigmaComplex) -> Result<SigmaComplex, ComplexError> {
        let facets: Vec<Facet> = self.facets.iter().chain(other.facets.iter()).copied().collect();
        let (c, _) = SigmaComplex::build(facets, self.periods())?;
        let reqs = self.requirements.union(&other.requirements).copied();
        Ok(c.with_requirements(reqs))
    }

    /// Re-expresses the complex with a coarser lattice, replicating the
    /// facets over the cosets. `sub` must be a full-rank sublattice.
    pub fn with_sublattice(&self, sub: &[Coord4]) -> Result<SigmaComplex, ComplexError> {
        let sub_l = PeriodLattice::new(sub)?;
        for g in sub {
            if !self.lattice.contains(*g) {
                return Err(ComplexError::NotSublattice(*g));
            }
        }
        let reps = self.lattice.coset_representatives(&sub_l)?;
        let mut facets = BTreeSet::new();
        for f in &self.facets {
            for r in &reps {
                facets.insert(reduce_facet(&sub_l, f.translated(*r)));
            }
        }
        Ok(SigmaComplex { facets, lattice: sub_l, requirements: self.requirements.clone() })
    }

    /// A finite patch: every representative translated by `k·g` for each
    /// period `g` and `0 <= k < extent`. Finite complexes are returned as is.
    pub fn unrolled(&self, extent: usize) -> SigmaComplex {
        if !self.is_periodic() {
            return self.clone();
        }
        let mut offsets = vec![Coord4::ZERO];
        for g in self.periods() {
            offsets = offsets
                .iter()
                .flat_map(|o| (0..extent as i64).map(move |k| *o + k * *g))
                .collect();
        }
        let facets = self
            .lifted_representatives()
            .into_iter()
            .flat_map(|f| offsets.iter().map(move |o| f.translated(*o)))
            .collect();
        SigmaComplex { facets, lattice: PeriodLattice::trivial(), requirements: self.requirements.clone() }
    }

    /// One lift of every representative, chosen so that the lifts form a
    /// connected patch: each facet is placed across an edge from one placed
    /// before it.
    pub fn lifted_representatives(&self) -> Vec<Facet> {
        let uses = self.edge_uses();
        let mut placed: BTreeMap<Facet, Coord4> = BTreeMap::new();
        for start in &self.facets {
            if placed.contains_key(start) {
                continue;
            }
            placed.insert(*start, Coord4::ZERO);
            let mut queue = std::collections::VecDeque::from([*start]);
            while let Some(f) = queue.pop_front() {
                let t = placed[&f];
                for e in f.edges() {
                    let r = self.reduce_edge(e);
                    let here = e.tail - r.tail;
                    for u in &uses[&r] {
                        if !placed.contains_key(&u.facet) {
                            placed.insert(u.facet, here + t - u.shift);
                            queue.push_back(u.facet);
                        }
                    }
                }
            }
        }
        placed.into_iter().map(|(f, t)| f.translated(t)).collect()
    }

    /// Number of connected components of the facet graph, where facets are
    /// adjacent when they share an edge.
    pub fn components(&self) -> usize {
        let uses = self.edge_uses();
        let idx: HashMap<Facet, usize> = self.facets.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut parent: Vec<usize> = (0..idx.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for us in uses.values() {
            for w in us.windows(2) {
                let a = find(&mut parent, idx[&w[0].facet]);
                let b = find(&mut parent, idx[&w[1].facet]);
                parent[a] = b;
            }
        }
        (0..idx.len()).filter(|&i| find(&mut parent, i) == i).count()
    }

    pub fn is_polyhedron(&self) -> PolyhedronReport {
        let bad_edges: Vec<Edge> = self.edges().into_iter().filter(|&(_, n)| n > 2).map(|(e, _)| e).collect();
        let bad_vertices: Vec<Coord4> = self
            .vertices()
            .into_iter()
            .filter(|v| matches!(self.link(*v), Ok(l) if !l.is_manifold()))
            .collect();
        PolyhedronReport { ok: bad_edges.is_empty() && bad_vertices.is_empty(), bad_edges, bad_vertices }
    }

    /// Edges of incidence one.
    pub fn boundary(&self) -> Vec<Edge> {
        self.boundary_loops().into_iter().flatten().collect()
    }

    /// Boundary edges chained into loops. Each loop starts at its smallest
    /// edge; a chain that cannot be closed is returned as an open run.
    pub fn boundary_loops(&self) -> Vec<Vec<Edge>> {
        let uses = self.edge_uses();
        let mut free: BTreeSet<Edge> = uses.iter().filter(|(_, u)| u.len() == 1).map(|(e, _)| *e).collect();
        // Work with actual edges: the shift lets a loop wander through
        // translates in a periodic complex.
        let mut at: HashMap<Coord4, Vec<Edge>> = HashMap::new();
        for e in &free {
            at.entry(e.tail).or_default().push(*e);
            at.entry(self.reduce(e.head())).or_default().push(*e);
        }
        let mut loops = Vec::new();
        while let Some(start) = free.pop_first() {
            let mut lp = vec![start];
            let mut cur = self.reduce(start.head());
            let origin = start.tail;
            while cur != origin {
                let next = at
                    .get(&cur)
                    .and_then(|es| es.iter().find(|e| free.contains(e)).copied());
                let Some(n) = next else { break };
                free.remove(&n);
                cur = if n.tail == cur { self.reduce(n.head()) } else { n.tail };
                lp.push(n);
            }
            loops.push(lp);
        }
        loops
    }

    /// True when no edge has incidence one.
    pub fn is_closed(&self) -> bool {
        self.edges().values().all(|&n| n != 1)
    }
}

impl fmt::Display for SigmaComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} facets", self.facets.len())?;
        if self.is_periodic() {
            write!(f, ", periods")?;
            for g in self.periods() {
                write!(f, " {g}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn reduce_facet(l: &PeriodLattice, f: Facet) -> Facet {
    Facet { anchor: l.reduce(f.anchor), ftype: f.ftype }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: [i64; 4], t: FacetType) -> Facet {
        Facet::new(a, t)
    }

    #[test]
    fn forbidden_types_rejected() {
        assert_eq!(FacetType::new(1, 2), Err(ComplexError::ForbiddenFacet(1, 2)));
        assert_eq!(FacetType::new(4, 3), Err(ComplexError::ForbiddenFacet(3, 4)));
        assert_eq!(FacetType::new(3, 1), Ok(FacetType::T13));
        assert!(matches!(FacetType::new(0, 3), Err(ComplexError::BadType(0, 3))));
        assert!(matches!(FacetType::new(2, 2), Err(ComplexError::BadType(2, 2))));
    }

    #[test]
    fn single_facet_has_four_boundary_edges() {
        let c = SigmaComplex::new([f([0; 4], FacetType::T13)], &[]).unwrap();
        let e = c.edges();
        assert_eq!(e.len(), 4);
        assert!(e.values().all(|&n| n == 1));
        let loops = c.boundary_loops();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), 4);
    }

    #[test]
    fn shared_edge_counts_twice() {
        let c = SigmaComplex::new([f([0; 4], FacetType::T13), f([0, 0, -1, 0], FacetType::T13)], &[]).unwrap();
        assert_eq!(c.edges()[&Edge::new(Coord4::ZERO, 1)], 2);
    }

    #[test]
    fn build_reports_duplicates_and_disconnection() {
        let (c, d) = SigmaComplex::build([f([0; 4], FacetType::T13), f([0; 4], FacetType::T13)], &[]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(d.len(), 1);
        let err = SigmaComplex::new([f([0; 4], FacetType::T13), f([5, 0, 0, 0], FacetType::T13)], &[]).unwrap_err();
        assert_eq!(err, ComplexError::Disconnected(2));
        assert_eq!(SigmaComplex::new([], &[]).unwrap_err(), ComplexError::Empty);
    }

    #[test]
    fn three_facets_on_one_edge_is_not_polyhedron() {
        let c = SigmaComplex::new(
            [f([0; 4], FacetType::T13), f([0, 0, -1, 0], FacetType::T13), f([0; 4], FacetType::T14)],
            &[],
        )
        .unwrap();
        let r = c.is_polyhedron();
        assert!(!r.ok);
        assert_eq!(r.bad_edges, vec![Edge::new(Coord4::ZERO, 1)]);
    }

    #[test]
    fn inversion_is_involution() {
        let x = f([1, -2, 0, 3], FacetType::T24);
        assert_eq!(x.inverted().inverted(), x);
        let mut a: Vec<_> = x.corners().iter().map(|c| -*c).collect();
        let mut b = x.inverted().corners().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn unrolled_replicates() {
        let c = SigmaComplex::new([f([0; 4], FacetType::T13)], &[Coord4::new(0, 0, 1, -1)]).unwrap();
        assert_eq!(c.unrolled(3).len(), 3);
    }
}
