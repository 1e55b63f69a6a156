use std::collections::VecDeque;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::vertex::{dir_vector, SignedDir};
use super::{ComplexError, Facet, FacetType, SigmaComplex};
use crate::lattice::Coord4;
use crate::star::StarState;

/// Plain quad mesh: positions plus faces given as four vertex indices in
/// cyclic order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawMesh {
    pub positions: Vec<[f64; 3]>,
    pub quads: Vec<[usize; 4]>,
}

fn matching_dir(d: Vector3<f64>, v: &[Vector3<f64>; 4], tol: f64) -> Option<SignedDir> {
    (1..=4i8)
        .flat_map(|k| [k, -k])
        .find(|&s| {
            let u = if s > 0 { v[(s - 1) as usize] } else { -v[(-s - 1) as usize] };
            (d - u).norm() <= tol
        })
}

/// Recovers integer star coordinates for a mesh realized from `star`.
///
/// Every edge must match some `±v_i` within `tol`. Labels are propagated
/// breadth-first from the first vertex of the first face; a conflict means
/// some closed loop of the mesh is not generically closed.
pub fn lift_geometry(mesh: &RawMesh, star: &StarState, tol: f64) -> Result<SigmaComplex, ComplexError> {
    let n = mesh.positions.len();
    if n == 0 || mesh.quads.is_empty() {
        return Err(ComplexError::BadMesh);
    }
    let v = star.vectors();
    let p: Vec<Vector3<f64>> = mesh.positions.iter().map(|x| Vector3::from(*x)).collect();
    // Adjacency with the signed direction from a to b.
    let mut adj: Vec<Vec<(usize, SignedDir)>> = vec![Vec::new(); n];
    for (fi, q) in mesh.quads.iter().enumerate() {
        if q.iter().any(|&i| i >= n) {
            return Err(ComplexError::BadMesh);
        }
        let scale = q.iter().map(|&i| p[i].norm()).fold(1.0, f64::max);
        if (p[q[0]] + p[q[2]] - p[q[1]] - p[q[3]]).norm() > tol * scale {
            return Err(ComplexError::NonParallelogramFace(fi));
        }
        for side in 0..4 {
            let (a, b) = (q[side], q[(side + 1) % 4]);
            let d = matching_dir(p[b] - p[a], &v, tol).ok_or(ComplexError::EdgeUnmatched { face: fi, side })?;
            adj[a].push((b, d));
            adj[b].push((a, -d));
        }
    }
    let root = mesh.quads[0][0];
    let mut label: Vec<Option<Coord4>> = vec![None; n];
    let mut parent: Vec<usize> = (0..n).collect();
    label[root] = Some(Coord4::ZERO);
    let mut queue = VecDeque::from([root]);
    while let Some(a) = queue.pop_front() {
        let la = label[a].unwrap();
        for &(b, d) in &adj[a] {
            let want = la + dir_vector(d);
            match label[b] {
                None => {
                    label[b] = Some(want);
                    parent[b] = a;
                    queue.push_back(b);
                }
                Some(lb) if lb != want => {
                    let path = |mut x: usize| {
                        let mut out = vec![x];
                        while parent[x] != x {
                            x = parent[x];
                            out.push(x);
                        }
                        out
                    };
                    let mut loop_vertices = path(a);
                    let mut back = path(b);
                    back.reverse();
                    loop_vertices.extend(back);
                    return Err(ComplexError::NonGeneric { vertex: b, loop_vertices });
                }
                Some(_) => {}
            }
        }
    }
    let mut facets = Vec::with_capacity(mesh.quads.len());
    for q in &mesh.quads {
        let mut ls = [Coord4::ZERO; 4];
        for (k, &i) in q.iter().enumerate() {
            ls[k] = label[i].ok_or(ComplexError::BadMesh)?;
        }
        let d1 = ls[1] - ls[0];
        let d2 = ls[2] - ls[1];
        let idx = |c: Coord4| (0..4).find(|&k| c.0[k] != 0).unwrap() as u8 + 1;
        let t = FacetType::new(idx(d1), idx(d2))?;
        let anchor = Coord4(std::array::from_fn(|k| ls.iter().map(|c| c.0[k]).min().unwrap()));
        facets.push(Facet::new(anchor, t));
    }
    SigmaComplex::new(facets, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star::tetrahedral_star;

    fn rhombus(star: &StarState) -> RawMesh {
        let v = star.vectors();
        let o = Vector3::zeros();
        let pts = [o, v[0], v[0] + v[2], v[2]];
        RawMesh { positions: pts.iter().map(|x| [x.x, x.y, x.z]).collect(), quads: vec![[0, 1, 2, 3]] }
    }

    #[test]
    fn lifts_single_facet() {
        let s = tetrahedral_star();
        let c = lift_geometry(&rhombus(&s), &s, 1e-9).unwrap();
        assert_eq!(c.facets().next(), Some(&Facet::new([0; 4], FacetType::T13)));
    }

    #[test]
    fn perturbed_edge_is_unmatched() {
        let s = tetrahedral_star();
        let mut m = rhombus(&s);
        m.positions[1][0] += 2e-6;
        m.positions[2][0] += 2e-6;
        assert!(matches!(lift_geometry(&m, &s, 1e-6), Err(ComplexError::EdgeUnmatched { .. })));
    }

    #[test]
    fn non_parallelogram_rejected() {
        let s = tetrahedral_star();
        let mut m = rhombus(&s);
        m.positions[2][2] += 0.5;
        assert!(matches!(lift_geometry(&m, &s, 1e-6), Err(ComplexError::NonParallelogramFace(0))));
    }
}
