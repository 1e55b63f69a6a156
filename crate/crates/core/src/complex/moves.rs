use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{reduce_facet, ComplexError, Edge, Facet, FacetType, Requirement, SigmaComplex};
use crate::lattice::{Coord4, PeriodLattice};

/// Index swaps of the star. A swap is a reflection only when the swapped
/// radii agree, which is recorded as a [`Requirement`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Swap12,
    Swap34,
}

impl Symmetry {
    fn indices(self) -> (usize, usize) {
        match self {
            Symmetry::Swap12 => (1, 2),
            Symmetry::Swap34 => (3, 4),
        }
    }

    pub fn requirement(self) -> Requirement {
        match self {
            Symmetry::Swap12 => Requirement::R1EqR2,
            Symmetry::Swap34 => Requirement::R3EqR4,
        }
    }

    pub fn apply_index(self, k: usize) -> usize {
        let (a, b) = self.indices();
        if k == a {
            b
        } else if k == b {
            a
        } else {
            k
        }
    }

    pub fn apply_coord(self, c: Coord4) -> Coord4 {
        let (a, b) = self.indices();
        c.swapped(a, b)
    }

    pub fn apply_facet(self, f: &Facet) -> Facet {
        let t = FacetType::new(self.apply_index(f.ftype.i()) as u8, self.apply_index(f.ftype.j()) as u8)
            .expect("index swaps preserve admissibility");
        Facet { anchor: self.apply_coord(f.anchor), ftype: t }
    }
}

impl SigmaComplex {
    /// Candidate facets that could be glued along a boundary edge: at most
    /// three of the four facets containing it.
    pub fn legal_extensions(&self, edge: Edge) -> Result<Vec<Facet>, ComplexError> {
        let counts = self.edges();
        let r = self.reduce_edge(edge);
        if counts.get(&r) != Some(&1) {
            return Err(ComplexError::NotBoundaryEdge(edge));
        }
        let k = edge.dir as usize;
        let mut out = Vec::new();
        for t in FacetType::with_index(k) {
            let m = if t.i() == k { t.j() } else { t.i() };
            for anchor in [edge.tail, edge.tail - Coord4::unit(m)] {
                let f = Facet::new(anchor, t);
                if self.contains(&f) {
                    continue;
                }
                let crowded = f.edges().iter().any(|e| counts.get(&self.reduce_edge(*e)).copied().unwrap_or(0) >= 2);
                if !crowded {
                    out.push(f);
                }
            }
        }
        Ok(out)
    }

    /// Adds one facet sharing at least one edge with the complex.
    pub fn extend(&self, facet: Facet) -> Result<SigmaComplex, ComplexError> {
        if self.contains(&facet) {
            return Err(ComplexError::Duplicate(facet));
        }
        let counts = self.edges();
        let mut attached = false;
        for e in facet.edges() {
            match counts.get(&self.reduce_edge(e)) {
                Some(&n) if n >= 2 => return Err(ComplexError::NonManifoldEdge(e)),
                Some(_) => attached = true,
                None => {}
            }
        }
        if !attached {
            return Err(ComplexError::NotAttached(facet));
        }
        let mut facets = self.facet_set().clone();
        facets.insert(reduce_facet(self.lattice(), facet));
        Ok(SigmaComplex::from_parts_unchecked(facets, self.lattice().clone(), self.requirements().clone()))
    }

    /// Applies an index swap to every anchor, facet type and period.
    pub fn mirror(&self, sym: Symmetry) -> SigmaComplex {
        let periods: Vec<Coord4> = self.periods().iter().map(|g| sym.apply_coord(*g)).collect();
        let lattice = PeriodLattice::new(&periods).expect("swaps preserve independence");
        let facets: BTreeSet<Facet> = self.facets().map(|f| reduce_facet(&lattice, sym.apply_facet(f))).collect();
        let mut reqs = self.requirements().clone();
        reqs.insert(sym.requirement());
        SigmaComplex::from_parts_unchecked(facets, lattice, reqs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lone() -> SigmaComplex {
        SigmaComplex::new([Facet::new([0; 4], FacetType::T13)], &[]).unwrap()
    }

    #[test]
    fn lone_facet_has_three_moves_per_edge() {
        let c = lone();
        for e in c.boundary() {
            let m = c.legal_extensions(e).unwrap();
            assert_eq!(m.len(), 3, "edge {e}");
            for f in m {
                assert!(f.edges().contains(&e));
                c.extend(f).unwrap();
            }
        }
    }

    #[test]
    fn dir_one_candidates() {
        let m = lone().legal_extensions(Edge::new(Coord4::ZERO, 1)).unwrap();
        let types: BTreeSet<_> = m.iter().map(|f| f.ftype).collect();
        assert_eq!(types, BTreeSet::from([FacetType::T13, FacetType::T14]));
        let m3 = lone().legal_extensions(Edge::new(Coord4::ZERO, 3)).unwrap();
        let types3: BTreeSet<_> = m3.iter().map(|f| f.ftype).collect();
        assert_eq!(types3, BTreeSet::from([FacetType::T13, FacetType::T23]));
    }

    #[test]
    fn extend_errors() {
        let c = lone();
        let f = Facet::new([0; 4], FacetType::T13);
        assert_eq!(c.extend(f), Err(ComplexError::Duplicate(f)));
        let c2 = c.extend(Facet::new([0, 0, -1, 0], FacetType::T13)).unwrap();
        assert!(matches!(c2.extend(Facet::new([0; 4], FacetType::T14)), Err(ComplexError::NonManifoldEdge(_))));
        assert!(matches!(c.extend(Facet::new([7, 0, 0, 0], FacetType::T14)), Err(ComplexError::NotAttached(_))));
        assert!(matches!(c2.legal_extensions(Edge::new(Coord4::ZERO, 1)), Err(ComplexError::NotBoundaryEdge(_))));
    }

    #[test]
    fn mirror_swaps_indices() {
        let m = lone().mirror(Symmetry::Swap12);
        assert_eq!(m.facets().next(), Some(&Facet::new([0; 4], FacetType::T23)));
        assert!(m.requirements().contains(&Requirement::R1EqR2));
        let back = m.mirror(Symmetry::Swap12);
        assert_eq!(back.facet_set(), lone().facet_set());
    }
}
