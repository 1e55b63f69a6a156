//! The vertex-type catalog, generated by enumerating vertex figures.
//!
//! The link of an interior vertex is a cycle of signed edge directions that
//! alternates between `{±1,±2}` and `{±3,±4}`, since every admissible facet
//! uses one index from each pair. Cycles of length 4, 6 and 8 are enumerated,
//! kept if the realized vertex figure does not intersect itself at the
//! tetrahedral star, and grouped into orbits under rotation, reversal and
//! the star symmetries.
//!
//! The symmetry group is generated by `1↔2`, `3↔4`, the point reflection
//! `v_k -> -v_k`, and the exchange `v1->v4, v2->v3, v3->v1, v4->v2`, which is
//! a rotoreflection of the tetrahedral star swapping the two star planes.
//!
//! Names attach to the canonical signature (the lexicographically smallest
//! representative of the orbit). Where the corner counts `(a,o)` do not
//! decide the name, the rules are:
//!
//! * valency 4, `(2,2)`: four distinct indices is Miura; two indices only
//!   (`±v_i` both present, a flat vertex) is Unfold; obtuse corners adjacent
//!   is Obtuse; alternating is Acute.
//! * valency 6, `(4,2)`: no three consecutive facets of equal type is
//!   Acute X; a coplanar triple around an acute middle corner is Obtuse L;
//!   of the two remaining orbits the more symmetric one (orbit size 8) is
//!   Crown and the other Broken Crown.
//! * valency 8, `(6,2)`: a type sequence of period 4 is Star, a palindromic
//!   one is Double X.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::vertex::{CornerClass, SignedDir};
use super::{ComplexError, Facet, FacetType};
use crate::lattice::Coord4;
use crate::geometry::quads_intersect;
use crate::star::tetrahedral_star;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexTypeName {
    Unfold,
    Obtuse,
    Acute,
    Saddle,
    Peak,
    Miura,
    #[serde(rename = "Obtuse X")]
    ObtuseX,
    #[serde(rename = "Acute X")]
    AcuteX,
    #[serde(rename = "Obtuse L")]
    ObtuseL,
    Crown,
    #[serde(rename = "Broken Crown")]
    BrokenCrown,
    #[serde(rename = "Double X")]
    DoubleX,
    Star,
    #[serde(rename = "Double L")]
    DoubleL,
}

impl VertexTypeName {
    pub const ALL: [VertexTypeName; 14] = [
        Self::Unfold,
        Self::Obtuse,
        Self::Acute,
        Self::Saddle,
        Self::Peak,
        Self::Miura,
        Self::ObtuseX,
        Self::AcuteX,
        Self::ObtuseL,
        Self::Crown,
        Self::BrokenCrown,
        Self::DoubleX,
        Self::Star,
        Self::DoubleL,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Unfold => "Unfold",
            Self::Obtuse => "Obtuse",
            Self::Acute => "Acute",
            Self::Saddle => "Saddle",
            Self::Peak => "Peak",
            Self::Miura => "Miura",
            Self::ObtuseX => "Obtuse X",
            Self::AcuteX => "Acute X",
            Self::ObtuseL => "Obtuse L",
            Self::Crown => "Crown",
            Self::BrokenCrown => "Broken Crown",
            Self::DoubleX => "Double X",
            Self::Star => "Star",
            Self::DoubleL => "Double L",
        }
    }

    /// Case-insensitive; spaces, dashes and underscores are ignored.
    pub fn parse(s: &str) -> Option<Self> {
        let key = |x: &str| x.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        let k = key(s);
        Self::ALL.into_iter().find(|n| key(n.as_str()) == k)
    }
}

impl fmt::Display for VertexTypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexType {
    pub name: VertexTypeName,
    pub valency: usize,
    pub acute: usize,
    pub obtuse: usize,
    /// Canonical cyclic sequence of signed edge directions.
    pub signature: Vec<SignedDir>,
    /// Number of distinct vertex figures (up to rotation and reversal) in
    /// the symmetry orbit.
    pub orbit_size: usize,
}

impl VertexType {
    pub fn curvature(&self, gamma: f64) -> f64 {
        super::vertex_curvature(gamma, self.acute, self.obtuse)
    }

    pub fn corner_classes(&self) -> Vec<CornerClass> {
        let n = self.signature.len();
        (0..n).map(|k| CornerClass::of_dirs(self.signature[k], self.signature[(k + 1) % n])).collect()
    }

    /// The facets around a vertex at `at` realizing this type.
    pub fn figure(&self, at: Coord4) -> Vec<Facet> {
        figure_of(&self.signature, at)
    }
}

/// One facet per consecutive pair of directions in a vertex cycle, each
/// with a corner at `at`.
pub fn figure_of(sig: &[SignedDir], at: Coord4) -> Vec<Facet> {
    let n = sig.len();
    (0..n)
        .filter_map(|k| {
            let (a, b) = (sig[k], sig[(k + 1) % n]);
            let t = FacetType::new(a.unsigned_abs(), b.unsigned_abs()).ok()?;
            let anchor = [a, b].iter().filter(|d| **d < 0).fold(at, |acc, d| acc - Coord4::unit(d.unsigned_abs() as usize));
            Some(Facet::new(anchor, t))
        })
        .collect()
}

type SignedPerm = [i8; 4];

fn apply(p: &SignedPerm, d: SignedDir) -> SignedDir {
    let img = p[(d.unsigned_abs() - 1) as usize];
    if d > 0 { img } else { -img }
}

fn symmetry_group() -> &'static [SignedPerm] {
    static GROUP: OnceLock<Vec<SignedPerm>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let gens: [SignedPerm; 4] = [[2, 1, 3, 4], [1, 2, 4, 3], [-1, -2, -3, -4], [4, 3, 1, 2]];
        let mut group: BTreeSet<SignedPerm> = BTreeSet::from([[1, 2, 3, 4]]);
        let mut frontier: Vec<SignedPerm> = vec![[1, 2, 3, 4]];
        while let Some(g) = frontier.pop() {
            for h in &gens {
                let gh: SignedPerm = std::array::from_fn(|k| apply(h, g[k]));
                if group.insert(gh) {
                    frontier.push(gh);
                }
            }
        }
        group.into_iter().collect()
    })
}

/// Smallest rotation of the sequence or its reversal.
fn cyclic_min(seq: &[SignedDir]) -> Vec<SignedDir> {
    let n = seq.len();
    let rev: Vec<SignedDir> = seq.iter().rev().copied().collect();
    let mut best: Option<Vec<SignedDir>> = None;
    for s in [seq, &rev[..]] {
        for r in 0..n {
            let cand: Vec<SignedDir> = s[r..].iter().chain(&s[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Orbit representative of a vertex signature.
pub fn canonical_signature(seq: &[SignedDir]) -> Vec<SignedDir> {
    symmetry_group()
        .iter()
        .map(|g| cyclic_min(&seq.iter().map(|d| apply(g, *d)).collect::<Vec<_>>()))
        .min()
        .unwrap_or_default()
}

fn is_alternating_cycle(seq: &[SignedDir]) -> bool {
    let n = seq.len();
    let distinct: BTreeSet<_> = seq.iter().collect();
    distinct.len() == n
        && (0..n).all(|k| {
            let (a, b) = (seq[k].unsigned_abs(), seq[(k + 1) % n].unsigned_abs());
            (a <= 2) != (b <= 2)
        })
}

/// Every closed alternating direction cycle of the given length, one per
/// rotation/reversal class.
fn raw_cycles(len: usize) -> Vec<Vec<SignedDir>> {
    const LOW: [SignedDir; 4] = [1, -1, 2, -2];
    const HIGH: [SignedDir; 4] = [3, -3, 4, -4];
    let mut out = BTreeSet::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, cur: &mut Vec<SignedDir>, out: &mut BTreeSet<Vec<SignedDir>>) {
        if cur.len() == len {
            out.insert(cyclic_min(cur));
            return;
        }
        let pool = if cur.len() % 2 == 0 { LOW } else { HIGH };
        for d in pool {
            if !cur.contains(&d) {
                cur.push(d);
                rec(len, cur, out);
                cur.pop();
            }
        }
    }
    rec(len, &mut cur, &mut out);
    out.into_iter().collect()
}

/// Whether the vertex figure embeds at the tetrahedral star: sectors that do
/// not share an edge must not meet outside the vertex.
pub(crate) fn embeds(seq: &[SignedDir], tol: f64) -> bool {
    let v = tetrahedral_star().vectors();
    let vec_of = |d: SignedDir| {
        let u = v[(d.unsigned_abs() - 1) as usize];
        if d > 0 { u } else { -u }
    };
    let n = seq.len();
    let quads: Vec<[Vector3<f64>; 4]> = (0..n)
        .map(|k| {
            let (a, b) = (vec_of(seq[k]), vec_of(seq[(k + 1) % n]));
            [Vector3::zeros(), a, a + b, b]
        })
        .collect();
    for p in 0..n {
        for q in p + 2..n {
            if p == 0 && q == n - 1 {
                continue;
            }
            if quads_intersect(&quads[p], &quads[q], tol) {
                return false;
            }
        }
    }
    true
}

fn type_sequence(sig: &[SignedDir]) -> Vec<(u8, u8)> {
    let n = sig.len();
    (0..n)
        .map(|k| {
            let (a, b) = (sig[k].unsigned_abs(), sig[(k + 1) % n].unsigned_abs());
            (a.min(b), a.max(b))
        })
        .collect()
}

fn name_of(sig: &[SignedDir], orbit: usize) -> VertexTypeName {
    use VertexTypeName::*;
    let n = sig.len();
    let classes: Vec<CornerClass> = (0..n).map(|k| CornerClass::of_dirs(sig[k], sig[(k + 1) % n])).collect();
    let a = classes.iter().filter(|c| **c == CornerClass::Acute).count();
    let o = n - a;
    let types = type_sequence(sig);
    let indices: BTreeSet<u8> = sig.iter().map(|d| d.unsigned_abs()).collect();
    let rot = |s: &[(u8, u8)], r: usize| -> Vec<(u8, u8)> { s[r..].iter().chain(&s[..r]).copied().collect() };
    match (n, a, o) {
        (4, 0, 4) => Saddle,
        (4, 4, 0) => Peak,
        (4, 2, 2) if indices.len() == 4 => Miura,
        (4, 2, 2) if indices.len() == 2 => Unfold,
        (4, 2, 2) => {
            if (0..4).any(|k| classes[k] == CornerClass::Obtuse && classes[(k + 1) % 4] == CornerClass::Obtuse) {
                Obtuse
            } else {
                Acute
            }
        }
        (6, 2, 4) => ObtuseX,
        (6, 4, 2) => {
            let triple = (0..6).find(|&k| types[k] == types[(k + 1) % 6] && types[(k + 1) % 6] == types[(k + 2) % 6]);
            match triple {
                None => AcuteX,
                Some(k) if classes[(k + 1) % 6] == CornerClass::Acute => ObtuseL,
                Some(_) if orbit == 8 => Crown,
                Some(_) => BrokenCrown,
            }
        }
        (8, 6, 2) => {
            if rot(&types, 4) == types {
                Star
            } else {
                DoubleX
            }
        }
        (8, 4, 4) => DoubleL,
        _ => unreachable!("vertex figure {sig:?} outside the known corner counts"),
    }
}

fn build_catalog() -> Vec<VertexType> {
    let mut orbits: BTreeMap<Vec<SignedDir>, usize> = BTreeMap::new();
    for len in [4, 6, 8] {
        for c in raw_cycles(len) {
            if embeds(&c, 1e-9) {
                *orbits.entry(canonical_signature(&c)).or_insert(0) += 1;
            }
        }
    }
    let mut types: Vec<VertexType> = orbits
        .into_iter()
        .map(|(sig, orbit_size)| {
            let name = name_of(&sig, orbit_size);
            let acute = (0..sig.len())
                .filter(|&k| CornerClass::of_dirs(sig[k], sig[(k + 1) % sig.len()]) == CornerClass::Acute)
                .count();
            VertexType { name, valency: sig.len(), acute, obtuse: sig.len() - acute, signature: sig, orbit_size }
        })
        .collect();
    types.sort_by_key(|t| t.name);
    types
}

/// The generated catalog, computed once.
pub fn enumerate_vertex_types() -> &'static [VertexType] {
    static CATALOG: OnceLock<Vec<VertexType>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

pub fn vertex_type_by_name(name: VertexTypeName) -> &'static VertexType {
    enumerate_vertex_types().iter().find(|t| t.name == name).expect("catalog covers every name")
}

pub(crate) fn classify_signature(sig: &[SignedDir]) -> Result<VertexType, ComplexError> {
    if !is_alternating_cycle(sig) {
        return Err(ComplexError::Unrecognized(sig.to_vec()));
    }
    let canon = canonical_signature(sig);
    enumerate_vertex_types()
        .iter()
        .find(|t| t.signature == canon)
        .cloned()
        .ok_or(ComplexError::Unrecognized(sig.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_cycle_counts() {
        assert_eq!(raw_cycles(4).len(), 36);
        assert_eq!(raw_cycles(6).len(), 96);
        assert_eq!(raw_cycles(8).len(), 72);
    }

    #[test]
    fn embeddable_counts() {
        let count = |n| raw_cycles(n).into_iter().filter(|c| embeds(c, 1e-9)).count();
        assert_eq!((count(4), count(6), count(8)), (32, 48, 16));
    }

    #[test]
    fn group_has_expected_order() {
        // Signed permutations preserving the pairing {1,2},{3,4}, with sign
        // flips tied together: 2 (pair swap) * 2 * 2 (within pairs) * 2 (sign).
        assert_eq!(symmetry_group().len(), 16);
    }

    #[test]
    fn orbit_sizes_sum_to_embeddable_count() {
        let cat = enumerate_vertex_types();
        let sum = |n| cat.iter().filter(|t| t.valency == n).map(|t| t.orbit_size).sum::<usize>();
        assert_eq!((sum(4), sum(6), sum(8)), (32, 48, 16));
    }

    #[test]
    fn names_are_unique() {
        let names: BTreeSet<_> = enumerate_vertex_types().iter().map(|t| t.name).collect();
        assert_eq!(names.len(), 14);
    }

    #[test]
    fn parse_names() {
        assert_eq!(VertexTypeName::parse("double-l"), Some(VertexTypeName::DoubleL));
        assert_eq!(VertexTypeName::parse("Broken Crown"), Some(VertexTypeName::BrokenCrown));
        assert_eq!(VertexTypeName::parse("nope"), None);
    }

    #[test]
    fn non_cycles_are_unrecognized() {
        assert!(classify_signature(&[1, 3, 1, 4]).is_err());
        assert!(classify_signature(&[1, 2, 3, 4]).is_err());
    }
}
