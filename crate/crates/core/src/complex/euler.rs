use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ComplexError, Facet, SigmaComplex};
use crate::lattice::{Coord4, PeriodLattice};

/// Angle defect `2π - aγ - o(π-γ)` of a vertex with `a` acute and `o` obtuse
/// corners.
pub fn vertex_curvature(gamma: f64, a: usize, o: usize) -> f64 {
    2.0 * PI - a as f64 * gamma - o as f64 * (PI - gamma)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub chi: i64,
    /// Absent when `chi` is odd.
    pub genus: Option<i64>,
    pub curvature_sum: f64,
    /// `curvature_sum - 2π·chi`.
    pub gauss_bonnet_residual: f64,
    /// Quotient vertex counts by `(acute, obtuse)`.
    pub vertex_counts: BTreeMap<(usize, usize), usize>,
}

// Orientation sign of each of a facet's edges when the boundary is walked
// a -> a+e_i -> a+e_i+e_j -> a+e_j.
const EDGE_SIGN: [i8; 4] = [1, 1, -1, -1];

impl SigmaComplex {
    /// Euler characteristic and total curvature of the quotient by `sub`,
    /// which must be a full-rank sublattice of the periods. An empty `sub`
    /// means the period lattice itself.
    pub fn quotient_euler(&self, sub: &[Coord4], gamma: f64) -> Result<EulerReport, ComplexError> {
        let q = if sub.is_empty() { self.clone() } else { self.with_sublattice(sub)? };
        let edges = q.edges();
        if edges.values().any(|&n| n != 2) {
            return Err(ComplexError::NotClosed);
        }
        let verts = q.vertices();
        let mut curvature_sum = 0.0;
        let mut vertex_counts = BTreeMap::new();
        for v in &verts {
            let link = q.link(*v)?;
            if !link.is_interior() {
                return Err(ComplexError::NotManifold(*v));
            }
            let (a, o) = link.counts();
            *vertex_counts.entry((a, o)).or_insert(0) += 1;
            curvature_sum += 2.0 * PI - link.angle_sum(gamma);
        }
        let (v, e, f) = (verts.len(), edges.len(), q.len());
        let chi = v as i64 - e as i64 + f as i64;
        let genus = (chi % 2 == 0).then(|| (2 - chi) / 2);
        Ok(EulerReport {
            vertices: v,
            edges: e,
            faces: f,
            chi,
            genus,
            curvature_sum,
            gauss_bonnet_residual: curvature_sum - 2.0 * PI * chi as f64,
            vertex_counts,
        })
    }

    /// For each period generator, whether translating by it preserves a
    /// consistent orientation of the surface. Requires every edge to have
    /// incidence at most two.
    pub fn orientation_character(&self) -> Result<Vec<bool>, ComplexError> {
        let uses = self.edge_uses();
        if uses.values().any(|u| u.len() > 2) {
            return Err(ComplexError::NonManifoldEdge(*uses.iter().find(|(_, u)| u.len() > 2).unwrap().0));
        }
        let k = self.lattice.rank();
        // Tree lift and sign of every representative.
        let mut placed: BTreeMap<Facet, (Coord4, i8)> = BTreeMap::new();
        // Linear conditions over GF(2): coefficient parities -> reversal bit.
        let mut rows: Vec<(Vec<u8>, u8)> = Vec::new();
        let first = *self.facets().next().ok_or(ComplexError::Empty)?;
        placed.insert(first, (Coord4::ZERO, 1));
        let mut queue = VecDeque::from([first]);
        while let Some(f) = queue.pop_front() {
            let (t, s) = placed[&f];
            for (idx, e) in f.edges().into_iter().enumerate() {
                let r = self.reduce_edge(e);
                let here = e.tail - r.tail;
                for u in &uses[&r] {
                    if u.facet == f && u.index == idx {
                        continue;
                    }
                    let t2 = here + t - u.shift;
                    let s2 = -s * EDGE_SIGN[idx] * EDGE_SIGN[u.index];
                    match placed.get(&u.facet) {
                        None => {
                            placed.insert(u.facet, (t2, s2));
                            queue.push_back(u.facet);
                        }
                        Some(&(tg, sg)) => {
                            let coeffs = self.lattice.coefficients(t2 - tg)?;
                            let bits = coeffs.iter().map(|c| c.rem_euclid(2) as u8).collect();
                            rows.push((bits, u8::from(s2 != sg)));
                        }
                    }
                }
            }
        }
        let x = solve_gf2(rows, k).ok_or(ComplexError::NonOrientable)?;
        Ok(x.into_iter().map(|b| b == 0).collect())
    }

    /// Whether the period `v` preserves orientation.
    pub fn translation_preserves_orientation(&self, v: Coord4) -> Result<bool, ComplexError> {
        let chars = self.orientation_character()?;
        let coeffs = self.lattice.coefficients(v)?;
        let flips = coeffs.iter().zip(&chars).filter(|(c, keeps)| c.rem_euclid(2) == 1 && !**keeps).count();
        Ok(flips % 2 == 0)
    }

    /// The largest sublattice of translations preserving orientation.
    pub fn orientation_preserving_periods(&self) -> Result<Vec<Coord4>, ComplexError> {
        let chars = self.orientation_character()?;
        let gens = self.periods();
        let Some(flip) = chars.iter().position(|p| !p) else {
            return Ok(gens.to_vec());
        };
        Ok(gens
            .iter()
            .zip(&chars)
            .enumerate()
            .map(|(k, (g, keeps))| {
                if k == flip {
                    2 * *g
                } else if *keeps {
                    *g
                } else {
                    *g + gens[flip]
                }
            })
            .collect())
    }

    /// Quotient by the orientation-preserving sublattice.
    pub fn oriented_quotient_euler(&self, gamma: f64) -> Result<EulerReport, ComplexError> {
        let sub = self.orientation_preserving_periods()?;
        let sub_l = PeriodLattice::new(&sub)?;
        if sub_l == *self.lattice() {
            self.quotient_euler(&[], gamma)
        } else {
            self.quotient_euler(&sub, gamma)
        }
    }
}

/// Solves `A x = b` over GF(2) for `n` unknowns; free variables are zero.
fn solve_gf2(mut rows: Vec<(Vec<u8>, u8)>, n: usize) -> Option<Vec<u8>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0[c] == 1) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.0[c] == 1 {
                for (x, y) in row.0.iter_mut().zip(&pivot.0) {
                    *x ^= y;
                }
                row.1 ^= pivot.1;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row.1 == 1) {
        return None;
    }
    let mut x = vec![0; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i].1;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curvature_values() {
        let g = (1.0f64 / 3.0).acos();
        assert_eq!(vertex_curvature(g, 2, 2), 0.0);
        assert!((vertex_curvature(g, 0, 4) - (4.0 * g - 2.0 * PI)).abs() < 1e-12);
        assert!((vertex_curvature(g, 4, 4) + 2.0 * PI).abs() < 1e-12);
        assert!((vertex_curvature(g, 6, 2) + 4.0 * g).abs() < 1e-12);
    }

    #[test]
    fn gf2_solver() {
        let rows = vec![(vec![1, 1, 0], 1), (vec![0, 1, 0], 1), (vec![0, 0, 0], 0)];
        assert_eq!(solve_gf2(rows, 3), Some(vec![0, 1, 0]));
        assert_eq!(solve_gf2(vec![(vec![1], 0), (vec![1], 1)], 1), None);
    }
}
