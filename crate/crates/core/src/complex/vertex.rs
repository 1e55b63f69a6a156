use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::catalog::{self, VertexType, VertexTypeName};
use super::{ComplexError, Facet, SigmaComplex};
use crate::lattice::Coord4;

/// A star direction with orientation: `k` stands for `+v_k`, `-k` for `-v_k`.
pub type SignedDir = i8;

pub(crate) fn dir_vector(d: SignedDir) -> Coord4 {
    let u = Coord4::unit(d.unsigned_abs() as usize);
    if d > 0 { u } else { -u }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerClass {
    Acute,
    Obtuse,
}

impl CornerClass {
    /// Interior angle of an admissible facet at a corner of this class.
    pub fn angle(self, gamma: f64) -> f64 {
        match self {
            CornerClass::Acute => gamma,
            CornerClass::Obtuse => PI - gamma,
        }
    }

    pub(crate) fn of_dirs(a: SignedDir, b: SignedDir) -> Self {
        // Two outgoing edges of equal sign meet at dot product -r_i r_j λ < 0.
        if (a > 0) == (b > 0) { CornerClass::Obtuse } else { CornerClass::Acute }
    }
}

/// A facet placed so that one of its corners sits at the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sector {
    pub facet: Facet,
    pub corner: usize,
    pub dirs: [SignedDir; 2],
}

impl Sector {
    pub fn class(&self) -> CornerClass {
        CornerClass::of_dirs(self.dirs[0], self.dirs[1])
    }
}

fn corner_dirs(f: &Facet, corner: usize) -> [SignedDir; 2] {
    let (i, j) = (f.ftype.i() as i8, f.ftype.j() as i8);
    match corner {
        0 => [i, j],
        1 => [-i, j],
        2 => [-i, -j],
        3 => [i, -j],
        _ => unreachable!(),
    }
}

/// The facets around one vertex and how they attach to each other.
#[derive(Debug, Clone)]
pub struct Link {
    pub vertex: Coord4,
    pub sectors: Vec<Sector>,
}

impl Link {
    fn degrees(&self) -> HashMap<SignedDir, usize> {
        let mut deg = HashMap::new();
        for s in &self.sectors {
            for d in s.dirs {
                *deg.entry(d).or_insert(0) += 1;
            }
        }
        deg
    }

    fn connected(&self) -> bool {
        let n = self.sectors.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(k) = stack.pop() {
            for (m, s) in self.sectors.iter().enumerate() {
                if !seen[m] && s.dirs.iter().any(|d| self.sectors[k].dirs.contains(d)) {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// One cycle (interior vertex) or one path (boundary vertex).
    pub fn is_manifold(&self) -> bool {
        let deg = self.degrees();
        if deg.values().any(|&d| d > 2) || !self.connected() {
            return false;
        }
        let ends = deg.values().filter(|&&d| d == 1).count();
        ends == 0 || ends == 2
    }

    pub fn is_interior(&self) -> bool {
        self.is_manifold() && self.degrees().values().all(|&d| d == 2)
    }

    pub fn valency(&self) -> usize {
        self.sectors.len()
    }

    /// Acute and obtuse corner counts.
    pub fn counts(&self) -> (usize, usize) {
        let a = self.sectors.iter().filter(|s| s.class() == CornerClass::Acute).count();
        (a, self.sectors.len() - a)
    }

    /// Sum of the corner angles at the vertex.
    pub fn angle_sum(&self, gamma: f64) -> f64 {
        self.sectors.iter().map(|s| s.class().angle(gamma)).sum()
    }

    /// Sectors in cyclic order together with the edge directions between
    /// them: sector `k` spans `dirs[k]` and `dirs[k+1]`. Starts at the sector
    /// with the smallest facet and proceeds towards the smaller neighbour.
    pub fn ordered(&self) -> Result<(Vec<Sector>, Vec<SignedDir>), ComplexError> {
        if !self.is_manifold() {
            return Err(ComplexError::NotManifold(self.vertex));
        }
        if !self.is_interior() {
            return Err(ComplexError::BoundaryVertex(self.vertex));
        }
        let n = self.sectors.len();
        let start = (0..n).min_by_key(|&k| self.sectors[k].facet).unwrap();
        let neighbour = |k: usize, d: SignedDir| (0..n).find(|&m| m != k && self.sectors[m].dirs.contains(&d)).unwrap();
        let s0 = self.sectors[start];
        let (na, nb) = (neighbour(start, s0.dirs[0]), neighbour(start, s0.dirs[1]));
        // Leave through the direction shared with the smaller neighbour.
        let mut out_dir = if self.sectors[na].facet <= self.sectors[nb].facet { s0.dirs[0] } else { s0.dirs[1] };
        let in_dir = if out_dir == s0.dirs[0] { s0.dirs[1] } else { s0.dirs[0] };
        let mut order = vec![s0];
        let mut dirs = vec![in_dir];
        let mut cur = start;
        loop {
            dirs.push(out_dir);
            let next = neighbour(cur, out_dir);
            if next == start {
                break;
            }
            let s = self.sectors[next];
            out_dir = if s.dirs[0] == out_dir { s.dirs[1] } else { s.dirs[0] };
            order.push(s);
            cur = next;
        }
        dirs.pop();
        Ok((order, dirs))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCensus {
    pub types: BTreeMap<VertexTypeName, usize>,
    pub boundary: usize,
    /// Interior or non-manifold vertices outside the catalog.
    pub unrecognized: Vec<Coord4>,
}

impl VertexCensus {
    pub fn count(&self, name: VertexTypeName) -> usize {
        self.types.get(&name).copied().unwrap_or(0)
    }

    pub fn interior(&self) -> usize {
        self.types.values().sum()
    }
}

impl SigmaComplex {
    /// All facet corners landing on `v`, modulo the lattice.
    pub fn link(&self, v: Coord4) -> Result<Link, ComplexError> {
        let v = self.reduce(v);
        let mut sectors = Vec::new();
        for f in self.facets() {
            for (k, c) in f.corners().into_iter().enumerate() {
                if self.reduce(c) == v {
                    let lifted = f.translated(v - c);
                    sectors.push(Sector { facet: lifted, corner: k, dirs: corner_dirs(f, k) });
                }
            }
        }
        if sectors.is_empty() {
            return Err(ComplexError::NoSuchVertex(v));
        }
        Ok(Link { vertex: v, sectors })
    }

    pub fn vertex_cycle(&self, v: Coord4) -> Result<Vec<(Facet, CornerClass)>, ComplexError> {
        let (order, _) = self.link(v)?.ordered()?;
        Ok(order.into_iter().map(|s| (s.facet, s.class())).collect())
    }

    /// Cyclic sequence of edge directions leaving `v`.
    pub fn vertex_signature(&self, v: Coord4) -> Result<Vec<SignedDir>, ComplexError> {
        Ok(self.link(v)?.ordered()?.1)
    }

    pub fn classify_vertex(&self, v: Coord4) -> Result<VertexType, ComplexError> {
        catalog::classify_signature(&self.vertex_signature(v)?)
    }

    /// Vertex types over all vertices of the complex (one representative
    /// per lattice class).
    pub fn vertex_census(&self) -> VertexCensus {
        let mut census = VertexCensus::default();
        for v in self.vertices() {
            match self.classify_vertex(v) {
                Ok(t) => *census.types.entry(t.name).or_insert(0) += 1,
                Err(ComplexError::BoundaryVertex(_)) => census.boundary += 1,
                Err(_) => census.unrecognized.push(v),
            }
        }
        census
    }

    /// Vertices whose link is a closed cycle.
    pub fn interior_vertices(&self) -> Vec<Coord4> {
        self.vertices().into_iter().filter(|v| self.link(*v).map(|l| l.is_interior()).unwrap_or(false)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FacetType;

    fn saddle() -> SigmaComplex {
        SigmaComplex::new(FacetType::ADMISSIBLE.map(|t| Facet::new([0; 4], t)), &[]).unwrap()
    }

    #[test]
    fn saddle_link_is_all_obtuse() {
        let c = saddle();
        let cyc = c.vertex_cycle(Coord4::ZERO).unwrap();
        assert_eq!(cyc.len(), 4);
        assert!(cyc.iter().all(|(_, k)| *k == CornerClass::Obtuse));
        assert_eq!(cyc[0].0, Facet::new([0; 4], FacetType::T13));
    }

    #[test]
    fn corners_away_from_center_are_boundary() {
        let c = saddle();
        assert!(matches!(c.vertex_cycle(Coord4::unit(1)), Err(ComplexError::BoundaryVertex(_))));
        assert!(matches!(c.link(Coord4::new(9, 9, 9, 9)), Err(ComplexError::NoSuchVertex(_))));
    }

    #[test]
    fn signature_follows_cycle() {
        let sig = saddle().vertex_signature(Coord4::ZERO).unwrap();
        assert_eq!(sig.len(), 4);
        for w in 0..4 {
            let (a, b) = (sig[w], sig[(w + 1) % 4]);
            assert!(FacetType::new(a.unsigned_abs(), b.unsigned_abs()).is_ok());
        }
    }
}
