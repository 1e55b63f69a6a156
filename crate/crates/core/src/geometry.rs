//! Realization of complexes in space, congruence and collapse checks, and
//! collision detection across a fold.

use std::collections::BTreeMap;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Facet, RawMesh, SigmaComplex};
use crate::lattice::Coord4;
use crate::star::{StarError, StarParams, StarState};

pub type Point = Vector3<f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Star(#[from] StarError),
    #[error("quad is degenerate (area {0:e})")]
    DegenerateQuad(f64),
    #[error("a periodic complex needs a replication extent of at least 1")]
    MissingExtent,
    #[error("steps must be at least 2, got {0}")]
    TooFewSteps(usize),
    #[error("sweep range [{0}, {1}] must lie inside (0,1)")]
    BadRange(f64, f64),
}

/// A complex realized at one fold state.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: BTreeMap<Coord4, Point>,
    pub quads: Vec<[Coord4; 4]>,
    pub facets: Vec<Facet>,
    pub state: StarState,
    pub base: Point,
}

impl Mesh {
    pub fn point(&self, c: &Coord4) -> Point {
        self.vertices[c]
    }

    pub fn quad_points(&self, k: usize) -> [Point; 4] {
        self.quads[k].map(|c| self.vertices[&c])
    }

    /// Largest distance across the bounding box.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = bounds(self.vertices.values());
        (hi - lo).norm()
    }

    /// Positions in sorted coordinate order with 0-based quads.
    pub fn to_raw(&self) -> RawMesh {
        let index: BTreeMap<Coord4, usize> = self.vertices.keys().enumerate().map(|(i, c)| (*c, i)).collect();
        RawMesh {
            positions: self.vertices.values().map(|p| [p.x, p.y, p.z]).collect(),
            quads: self.quads.iter().map(|q| q.map(|c| index[&c])).collect(),
        }
    }
}

fn bounds<'a>(pts: impl Iterator<Item = &'a Point>) -> (Point, Point) {
    let mut lo = Point::repeat(f64::INFINITY);
    let mut hi = Point::repeat(f64::NEG_INFINITY);
    for p in pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

/// Position of a star coordinate: `base + Σ n_i v_i`.
pub fn position(c: &Coord4, v: &[Point; 4], base: &Point) -> Point {
    (0..4).fold(*base, |acc, k| acc + v[k] * c.0[k] as f64)
}

/// Realizes the complex at a given star state. Periodic complexes are
/// replicated `extent` times along each period.
pub fn realize_state(complex: &SigmaComplex, state: &StarState, base: Point, extent: usize) -> Result<Mesh, GeometryError> {
    if complex.is_periodic() && extent == 0 {
        return Err(GeometryError::MissingExtent);
    }
    let patch = complex.unrolled(extent);
    let v = state.vectors();
    let mut vertices = BTreeMap::new();
    let mut quads = Vec::with_capacity(patch.len());
    let mut facets = Vec::with_capacity(patch.len());
    for f in patch.facets() {
        let cs = f.corners();
        for c in &cs {
            vertices.entry(*c).or_insert_with(|| position(c, &v, &base));
        }
        quads.push(cs);
        facets.push(*f);
    }
    Ok(Mesh { vertices, quads, facets, state: *state, base })
}

/// Realizes the complex at fold parameter `t` with base point at the origin.
pub fn realize(complex: &SigmaComplex, params: &StarParams, t: f64, extent: usize) -> Result<Mesh, GeometryError> {
    realize_state(complex, &params.state_at(t)?, Point::zeros(), extent)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub ok: bool,
    /// Largest relative change of a side or diagonal length.
    pub max_deviation: f64,
    /// Facets whose shape changed by more than the tolerance.
    pub failures: Vec<Facet>,
}

fn facet_lengths(p: &[Point; 4]) -> [f64; 4] {
    [(p[1] - p[0]).norm(), (p[3] - p[0]).norm(), (p[2] - p[0]).norm(), (p[3] - p[1]).norm()]
}

/// Compares side and diagonal lengths facet by facet between two meshes of
/// the same complex.
pub fn congruence_check_meshes(a: &Mesh, b: &Mesh, tol: f64) -> CongruenceReport {
    let mut report = CongruenceReport { ok: true, ..Default::default() };
    for k in 0..a.quads.len() {
        let la = facet_lengths(&a.quad_points(k));
        let lb = facet_lengths(&b.quad_points(k));
        let dev = la.iter().zip(&lb).map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
        report.max_deviation = report.max_deviation.max(dev);
        if dev >= tol {
            report.ok = false;
            report.failures.push(a.facets[k]);
        }
    }
    report
}

pub fn congruence_check(
    complex: &SigmaComplex,
    params: &StarParams,
    t1: f64,
    t2: f64,
    tol: f64,
    extent: usize,
) -> Result<CongruenceReport, GeometryError> {
    let a = realize(complex, params, t1, extent)?;
    let b = realize(complex, params, t2, extent)?;
    Ok(congruence_check_meshes(&a, &b, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapsePlane {
    /// `t = 1`: every vertex has `x = 0`.
    PlaneX0,
    /// `t = 0`: every vertex has `y = 0`.
    PlaneY0,
}

/// Largest distance of a vertex from the collapse plane at its endpoint.
pub fn collapse_extent(complex: &SigmaComplex, params: &StarParams, plane: CollapsePlane, extent: usize) -> Result<f64, GeometryError> {
    let (t, axis) = match plane {
        CollapsePlane::PlaneX0 => (1.0, 0),
        CollapsePlane::PlaneY0 => (0.0, 1),
    };
    let m = realize(complex, params, t, extent)?;
    Ok(m.vertices.values().map(|p| p[axis].abs()).fold(0.0, f64::max))
}

fn normal(q: &[Point; 4]) -> Point {
    (q[2] - q[0]).cross(&(q[3] - q[1]))
}

fn quad_area(q: &[Point; 4]) -> f64 {
    normal(q).norm() / 2.0
}

fn project_interval(q: &[Point; 4], axis: &Point) -> (f64, f64) {
    q.iter().map(|p| p.dot(axis)).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

fn overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.1.min(b.1) - a.0.max(b.0)
}

/// Interval along `dir` where the plane `n·x = d` cuts the quad.
fn chord(q: &[Point; 4], n: &Point, d: f64, dir: &Point, tol: f64) -> (f64, f64) {
    let s: Vec<f64> = q.iter().map(|p| n.dot(p) - d).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut take = |p: Point| {
        let x = p.dot(dir);
        lo = lo.min(x);
        hi = hi.max(x);
    };
    for k in 0..4 {
        let (p, q2, sp, sq) = (q[k], q[(k + 1) % 4], s[k], s[(k + 1) % 4]);
        if sp.abs() <= tol {
            take(p);
        }
        if (sp > tol && sq < -tol) || (sp < -tol && sq > tol) {
            take(p + (q2 - p) * (sp / (sp - sq)));
        }
    }
    (lo, hi)
}

/// Whether the relative interiors of two planar convex quads meet. Contact
/// along shared edges or at shared corners does not count.
pub fn quads_intersect(a: &[Point; 4], b: &[Point; 4], tol: f64) -> bool {
    let na = normal(a);
    let nb = normal(b);
    let (la, lb) = (na.norm(), nb.norm());
    if la <= f64::MIN_POSITIVE || lb <= f64::MIN_POSITIVE {
        return false;
    }
    let (na, nb) = (na / la, nb / lb);
    let da = na.dot(&a[0]);
    let db = nb.dot(&b[0]);
    let cross = na.cross(&nb);
    let coplanar = cross.norm() <= tol && b.iter().all(|p| (na.dot(p) - da).abs() <= tol);
    if coplanar {
        // Separating axes are the in-plane normals of all eight sides.
        for q in [a, b] {
            for k in 0..4 {
                let e = q[(k + 1) % 4] - q[k];
                let axis = na.cross(&e);
                let n = axis.norm();
                if n <= f64::MIN_POSITIVE {
                    continue;
                }
                let axis = axis / n;
                if overlap(project_interval(a, &axis), project_interval(b, &axis)) <= tol {
                    return false;
                }
            }
        }
        return true;
    }
    let straddles = |q: &[Point; 4], n: &Point, d: f64| {
        let (lo, hi) = q.iter().map(|p| n.dot(p) - d).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
        lo < -tol && hi > tol
    };
    if !straddles(a, &nb, db) || !straddles(b, &na, da) {
        return false;
    }
    let dir = cross / cross.norm();
    let ca = chord(a, &nb, db, &dir, tol);
    let cb = chord(b, &na, da, &dir, tol);
    overlap(ca, cb) > tol
}

/// Checked variant of [`quads_intersect`] that rejects degenerate quads.
pub fn facets_intersect(a: &[Point; 4], b: &[Point; 4], tol: f64) -> Result<bool, GeometryError> {
    for q in [a, b] {
        let scale = (q[2] - q[0]).norm().max((q[3] - q[1]).norm()).max(1.0);
        let area = quad_area(q);
        if area < tol * tol * scale {
            return Err(GeometryError::DegenerateQuad(area));
        }
    }
    Ok(quads_intersect(a, b, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub steps: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    /// Replication extent for periodic complexes.
    pub extent: usize,
    /// Bisection stops once the bracket is this narrow.
    pub refine: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { steps: 50, t_lo: 0.02, t_hi: 0.98, extent: 2, refine: 1e-4 }
    }
}

impl SweepOptions {
    pub fn with_margin(margin: f64) -> Self {
        SweepOptions { t_lo: margin, t_hi: 1.0 - margin, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionHit {
    pub facet_a: Facet,
    pub facet_b: Facet,
    /// Refined bracket of the first sampled run of intersection.
    pub t_lo: f64,
    pub t_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub hits: Vec<CollisionHit>,
    pub steps: usize,
    pub resolution: f64,
}

impl CollisionReport {
    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }
}

struct SweepContext {
    patch: SigmaComplex,
    params: StarParams,
    tol: f64,
    facets: Vec<Facet>,
}

impl SweepContext {
    fn realize(&self, t: f64) -> Result<Mesh, GeometryError> {
        realize(&self.patch, &self.params, t, 1)
    }

    fn pair_hits(&self, a: usize, b: usize, t: f64) -> Result<bool, GeometryError> {
        let v = self.params.state_at(t)?.vectors();
        let o = Point::zeros();
        let qa = self.facets[a].corners().map(|c| position(&c, &v, &o));
        let qb = self.facets[b].corners().map(|c| position(&c, &v, &o));
        Ok(quads_intersect(&qa, &qb, self.tol))
    }

    /// Candidate pairs intersecting at one sample.
    fn sample(&self, t: f64, pairs: &[(usize, usize)]) -> Result<Vec<(usize, usize)>, GeometryError> {
        let m = self.realize(t)?;
        let quads: Vec<[Point; 4]> = self.facets.iter().map(|f| corners_at(&m, f)).collect();
        let boxes: Vec<(Point, Point)> = quads.iter().map(|q| bounds(q.iter())).collect();
        let tol = self.tol;
        Ok(pairs
            .iter()
            .copied()
            .filter(|&(a, b)| {
                let (la, ha) = boxes[a];
                let (lb, hb) = boxes[b];
                (0..3).all(|k| la[k] <= hb[k] + tol && lb[k] <= ha[k] + tol) && quads_intersect(&quads[a], &quads[b], tol)
            })
            .collect())
    }
}

fn corners_at(m: &Mesh, f: &Facet) -> [Point; 4] {
    f.corners().map(|c| m.vertices[&c])
}

/// Samples the fold uniformly and reports pairs of facets without a common
/// edge whose interiors meet. Pairs hinged at one vertex are kept, since
/// contact at that corner alone is not a hit. Each hit is bracketed by bisection.
pub fn collision_sweep(complex: &SigmaComplex, params: &StarParams, opts: &SweepOptions) -> Result<CollisionReport, GeometryError> {
    if opts.steps < 2 {
        return Err(GeometryError::TooFewSteps(opts.steps));
    }
    if !(opts.t_lo > 0.0 && opts.t_hi < 1.0 && opts.t_lo < opts.t_hi) {
        return Err(GeometryError::BadRange(opts.t_lo, opts.t_hi));
    }
    if complex.is_periodic() && opts.extent == 0 {
        return Err(GeometryError::MissingExtent);
    }
    let patch = complex.unrolled(opts.extent);
    let facets: Vec<Facet> = patch.facets().copied().collect();
    let diameter = realize(&patch, params, 0.5, 1)?.diameter().max(1.0);
    let ctx = SweepContext { patch, params: *params, tol: 1e-7 * diameter, facets };
    let n = ctx.facets.len();
    let corner_sets: Vec<[Coord4; 4]> = ctx.facets.iter().map(|f| f.corners()).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| corner_sets[a].iter().filter(|c| corner_sets[b].contains(c)).count() < 2)
        .collect();
    let ts: Vec<f64> = (0..opts.steps)
        .map(|k| opts.t_lo + (opts.t_hi - opts.t_lo) * k as f64 / (opts.steps - 1) as f64)
        .collect();
    let per_sample: Vec<Vec<(usize, usize)>> = ts.par_iter().map(|&t| ctx.sample(t, &pairs)).collect::<Result<_, _>>()?;
    // First sample index at which each pair intersects.
    let mut first: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut last: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (k, hits) in per_sample.iter().enumerate() {
        for p in hits {
            first.entry(*p).or_insert(k);
            // Only extend the first contiguous run.
            match last.get(p) {
                Some(&l) if l + 1 != k => {}
                _ => {
                    last.insert(*p, k);
                }
            }
        }
    }
    let mut hits: Vec<CollisionHit> = first
        .par_iter()
        .map(|(&(a, b), &k0)| -> Result<CollisionHit, GeometryError> {
            let k1 = last[&(a, b)];
            let lo = if k0 == 0 { ts[0] } else { ctx.bisect(a, b, ts[k0 - 1], ts[k0], opts.refine, false)? };
            let hi = if k1 + 1 == ts.len() { ts[k1] } else { ctx.bisect(a, b, ts[k1], ts[k1 + 1], opts.refine, true)? };
            let (fa, fb) = (ctx.facets[a], ctx.facets[b]);
            Ok(CollisionHit { facet_a: fa, facet_b: fb, t_lo: lo, t_hi: hi })
        })
        .collect::<Result<_, _>>()?;
    hits.sort_by(|x, y| x.t_lo.total_cmp(&y.t_lo).then(x.facet_a.cmp(&y.facet_a)).then(x.facet_b.cmp(&y.facet_b)));
    Ok(CollisionReport { hits, steps: opts.steps, resolution: opts.refine })
}

/// Existing facets whose interiors meet `candidate` at fold parameter `t`.
/// Facets sharing an edge with the candidate are skipped. For periodic
/// complexes every translate within `extent` periods on either side is
/// tested.
pub fn placement_collisions(
    complex: &SigmaComplex,
    candidate: &Facet,
    params: &StarParams,
    t: f64,
    extent: usize,
) -> Result<Vec<Facet>, GeometryError> {
    let v = params.state_at(t)?.vectors();
    let o = Point::zeros();
    let mut offsets = vec![Coord4::ZERO];
    for g in complex.periods() {
        let e = extent as i64;
        offsets = offsets.iter().flat_map(|x| (-e..=e).map(move |k| *x + k * *g)).collect();
    }
    let own = candidate.corners();
    let qc = own.map(|c| position(&c, &v, &o));
    let mut quads: Vec<(Facet, [Point; 4])> = Vec::new();
    for f in complex.facets() {
        for off in &offsets {
            let g = f.translated(*off);
            let cs = g.corners();
            if cs.iter().filter(|c| own.contains(c)).count() >= 2 {
                continue;
            }
            quads.push((*f, cs.map(|c| position(&c, &v, &o))));
        }
    }
    let (lo, hi) = bounds(quads.iter().flat_map(|(_, q)| q.iter()).chain(qc.iter()));
    let tol = 1e-7 * (hi - lo).norm().max(1.0);
    let mut hits: Vec<Facet> = quads.iter().filter(|(_, q)| quads_intersect(&qc, q, tol)).map(|(f, _)| *f).collect();
    hits.dedup();
    Ok(hits)
}

impl SweepContext {
    /// Narrows `[lo, hi]` around the switch of the intersection predicate.
    /// With `hit_at_lo` the pair intersects at `lo` and not at `hi`.
    fn bisect(&self, a: usize, b: usize, mut lo: f64, mut hi: f64, eps: f64, hit_at_lo: bool) -> Result<f64, GeometryError> {
        while hi - lo > eps {
            let mid = 0.5 * (lo + hi);
            if self.pair_hits(a, b, mid)? == hit_at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(if hit_at_lo { lo } else { hi })
    }
}
