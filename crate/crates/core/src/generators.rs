//! Named example complexes.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, Facet, FacetType, Requirement, SigmaComplex, Symmetry};
use crate::lattice::Coord4;
use crate::star::StarParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("unknown generator {0:?}")]
    Unknown(String),
    #[error("size parameters must be at least 1")]
    BadSize,
    #[error("hollowped index must be 1..=4, got {0}")]
    BadIndex(usize),
    #[error("gluing word must be a nonempty string of L and R, got {0:?}")]
    InvalidWord(String),
    #[error("cells {0} and {1} overlap")]
    OverlappingCells(usize, usize),
}

const fn c4(a: i64, b: i64, c: i64, d: i64) -> Coord4 {
    Coord4::new(a, b, c, d)
}

fn f(a: Coord4, t: FacetType) -> Facet {
    Facet::new(a, t)
}

fn e(k: usize) -> Coord4 {
    Coord4::unit(k)
}

fn translate_all(fs: &[Facet], by: Coord4) -> impl Iterator<Item = Facet> + '_ {
    fs.iter().map(move |x| x.translated(by))
}

/// `base` translated by every `i·p + j·q` with `0<=i<m`, `0<=j<n`.
fn grid(base: &[Facet], p: Coord4, q: Coord4, m: usize, n: usize) -> Vec<Facet> {
    let mut out = Vec::new();
    for i in 0..m as i64 {
        for j in 0..n as i64 {
            out.extend(translate_all(base, i * p + j * q));
        }
    }
    out
}

fn sized(m: usize, n: usize) -> Result<(), GeneratorError> {
    if m == 0 || n == 0 { Err(GeneratorError::BadSize) } else { Ok(()) }
}

/// A doubly periodic pattern from a fundamental piece: either the periodic
/// complex on the `m×n` supercell or the finite `m×n` patch.
fn doubly(base: &[Facet], p: Coord4, q: Coord4, m: usize, n: usize, periodic: bool) -> Result<SigmaComplex, GeneratorError> {
    sized(m, n)?;
    let facets = grid(base, p, q, m, n);
    let periods = if periodic { vec![m as i64 * p, n as i64 * q] } else { vec![] };
    Ok(SigmaComplex::new(facets, &periods)?)
}

pub const EGGBOX_PERIODS: [Coord4; 2] = [c4(1, -1, 0, 0), c4(0, 0, 1, -1)];
pub const MIURA_PERIODS: [Coord4; 2] = [c4(1, 1, 0, 0), c4(0, 0, 1, -1)];
pub const LINK_PERIODS: [Coord4; 3] = [c4(1, 0, -1, 0), c4(0, 1, 0, -1), c4(1, 0, 1, 0)];

/// The saddle of all four admissible facets at one vertex.
pub fn eggbox_piece() -> Vec<Facet> {
    FacetType::ADMISSIBLE.iter().map(|t| f(Coord4::ZERO, *t)).collect()
}

pub fn eggbox(m: usize, n: usize, periodic: bool) -> Result<SigmaComplex, GeneratorError> {
    doubly(&eggbox_piece(), EGGBOX_PERIODS[0], EGGBOX_PERIODS[1], m, n, periodic)
}

pub fn miura_piece() -> Vec<Facet> {
    let down = -e(2);
    vec![f(Coord4::ZERO, FacetType::T13), f(Coord4::ZERO, FacetType::T14), f(down, FacetType::T23), f(down, FacetType::T24)]
}

pub fn miura(m: usize, n: usize, periodic: bool) -> Result<SigmaComplex, GeneratorError> {
    doubly(&miura_piece(), MIURA_PERIODS[0], MIURA_PERIODS[1], m, n, periodic)
}

/// Facets of the hollowped `H_i` anchored at `a`: the parallelepiped on the
/// three star vectors other than `v_i`, minus its forbidden faces.
pub fn hollowped_facets(i: usize, a: Coord4) -> Result<Vec<Facet>, GeneratorError> {
    if !(1..=4).contains(&i) {
        return Err(GeneratorError::BadIndex(i));
    }
    let rest: Vec<usize> = (1..=4).filter(|&k| k != i).collect();
    let mut out = Vec::new();
    for (x, y, z) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        if let Ok(t) = FacetType::new(rest[x] as u8, rest[y] as u8) {
            out.push(f(a, t));
            out.push(f(a + e(rest[z]), t));
        }
    }
    Ok(out)
}

pub fn hollowped(i: usize) -> Result<SigmaComplex, GeneratorError> {
    Ok(SigmaComplex::new(hollowped_facets(i, Coord4::ZERO)?, &[])?)
}

/// A tube of `n` periods: `H_4` climbing along `v_3`, then `H_3` returning
/// along `-v_4`. Invariant under `v_3 - v_4`.
pub fn tube(n: usize) -> Result<SigmaComplex, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::BadSize);
    }
    let period = c4(0, 0, 1, -1);
    let mut piece = hollowped_facets(4, Coord4::ZERO)?;
    piece.extend(hollowped_facets(3, period)?);
    let facets: Vec<Facet> = (0..n as i64).flat_map(|k| translate_all(&piece, k * period).collect::<Vec<_>>()).collect();
    Ok(SigmaComplex::new(facets, &[])?)
}

/// Geometric overlap of two solid parallelepipeds at the symmetric fold.
fn cells_overlap(a: (Coord4, usize), b: (Coord4, usize), params: &StarParams) -> bool {
    let v = params.state_at(0.5).expect("interior state").vectors();
    let solid = |(anchor, skip): (Coord4, usize)| {
        let ks: Vec<usize> = (1..=4).filter(|&k| k != skip).collect();
        let origin = crate::geometry::position(&anchor, &v, &Vector3::zeros());
        let m = Matrix3::from_columns(&[v[ks[0] - 1], v[ks[1] - 1], v[ks[2] - 1]]);
        (origin, m)
    };
    let (oa, ma) = solid(a);
    let (ob, mb) = solid(b);
    let corners = |o: Vector3<f64>, m: Matrix3<f64>| {
        (0..8).map(move |bits| o + (0..3).filter(|k| bits >> k & 1 == 1).map(|k| m.column(k).into_owned()).sum::<Vector3<f64>>())
    };
    let mut axes: Vec<Vector3<f64>> = Vec::new();
    for m in [ma, mb] {
        for k in 0..3 {
            axes.push(m.column((k + 1) % 3).cross(&m.column((k + 2) % 3)));
        }
    }
    for p in 0..3 {
        for q in 0..3 {
            axes.push(ma.column(p).cross(&mb.column(q)));
        }
    }
    let tol = 1e-9;
    axes.iter().filter(|ax| ax.norm() > tol).all(|ax| {
        let ax = ax.normalize();
        let span = |it: &mut dyn Iterator<Item = Vector3<f64>>| {
            it.map(|p| p.dot(&ax)).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)))
        };
        let (la, ha) = span(&mut corners(oa, ma));
        let (lb, hb) = span(&mut corners(ob, mb));
        ha.min(hb) - la.max(lb) > tol
    })
}

/// Union of the hollowpeds of a set of cells `(anchor, excluded index)`
/// whose solid parallelepipeds must not overlap.
pub fn tiling_to_complex(cells: &[(Coord4, usize)]) -> Result<SigmaComplex, GeneratorError> {
    let params = StarParams::tetrahedral();
    for (x, a) in cells.iter().enumerate() {
        if !(1..=4).contains(&a.1) {
            return Err(GeneratorError::BadIndex(a.1));
        }
        for (y, b) in cells.iter().enumerate().skip(x + 1) {
            if cells_overlap(*a, *b, &params) {
                return Err(GeneratorError::OverlappingCells(x, y));
            }
        }
    }
    let mut facets = Vec::new();
    for (a, i) in cells {
        facets.extend(hollowped_facets(*i, *a)?);
    }
    Ok(SigmaComplex::new(facets, &[])?)
}

/// The four parallelepipeds filling one standard dodecahedron.
pub fn dodecahedron_cells(at: Coord4) -> [(Coord4, usize); 4] {
    [(at, 1), (at, 2), (at, 3), (at, 4)]
}

fn fractal_facets(generation: usize) -> Vec<Facet> {
    let base: Vec<Facet> = tiling_to_complex(&dodecahedron_cells(Coord4::ZERO))
        .expect("the dodecahedral cells tile")
        .facets()
        .copied()
        .collect();
    let ones = c4(1, 1, 1, 1);
    let mut current = base.clone();
    let mut center = Coord4::ZERO;
    let mut flipped = false;
    for _ in 0..generation {
        let mut next = Vec::with_capacity(current.len() * 4 + base.len());
        for x in &current {
            let (ei, ej) = (e(x.ftype.i()), e(x.ftype.j()));
            let a = 2 * x.anchor;
            for d in [Coord4::ZERO, ei, ej, ei + ej] {
                next.push(f(a + d, x.ftype));
            }
        }
        let c2 = 2 * center;
        // The four small facets around the central saddle.
        let hole: Vec<Facet> = FacetType::ADMISSIBLE
            .iter()
            .map(|t| if flipped { f(c2 - e(t.i()) - e(t.j()), *t) } else { f(c2, *t) })
            .collect();
        next.retain(|x| !hole.contains(x));
        if flipped {
            center = c2 - ones;
            next.extend(translate_all(&base, center));
        } else {
            center = c2 + ones;
            next.extend(base.iter().map(|x| x.inverted().translated(center)));
        }
        flipped = !flipped;
        current = next;
    }
    current
}

/// Generation `k` of the fractal. Each step doubles the coordinates,
/// removes the four small facets at the central saddle and fills the inner
/// octagon with a copy of generation 0, point-reflected on every other step
/// so that its boundary matches.
pub fn fractal(generation: usize) -> Result<SigmaComplex, GeneratorError> {
    Ok(SigmaComplex::new(fractal_facets(generation), &[])?)
}

/// Eight facets around the origin: three `Π14` and three `Π23` in two L
/// shapes, joined by one `Π13` and one `Π24`.
pub fn double_l_facets() -> Vec<Facet> {
    use FacetType as T;
    vec![
        f(c4(0, -1, 0, -1), T::T24),
        f(c4(0, -1, 0, 0), T::T23),
        f(c4(0, 0, 0, 0), T::T23),
        f(c4(0, 0, -1, 0), T::T23),
        f(c4(-1, 0, -1, 0), T::T13),
        f(c4(-1, 0, 0, 0), T::T14),
        f(c4(0, 0, 0, 0), T::T14),
        f(c4(0, 0, 0, -1), T::T14),
    ]
}

pub fn double_l() -> Result<SigmaComplex, GeneratorError> {
    Ok(SigmaComplex::new(double_l_facets(), &[])?)
}

/// `H_2 ∪ H_4`, sharing the facet `Π13` at the origin.
pub fn link_facets() -> Vec<Facet> {
    let mut v = hollowped_facets(2, Coord4::ZERO).expect("valid index");
    v.extend(hollowped_facets(4, Coord4::ZERO).expect("valid index"));
    v
}

pub fn link() -> Result<SigmaComplex, GeneratorError> {
    Ok(SigmaComplex::new(link_facets(), &[])?)
}

/// Triply periodic field of links. Periodic output carries the link
/// lattice; otherwise `extent` copies are laid out along each period.
pub fn link_field(extent: usize, periodic: bool) -> Result<SigmaComplex, GeneratorError> {
    triply(&link_facets(), &LINK_PERIODS, extent, periodic)
}

fn triply(base: &[Facet], periods: &[Coord4; 3], extent: usize, periodic: bool) -> Result<SigmaComplex, GeneratorError> {
    if extent == 0 {
        return Err(GeneratorError::BadSize);
    }
    if periodic {
        let scaled: Vec<Coord4> = periods.iter().map(|p| extent as i64 * *p).collect();
        let c = SigmaComplex::new(base.iter().copied(), periods)?;
        return Ok(c.with_sublattice(&scaled)?);
    }
    let mut facets = Vec::new();
    for i in 0..extent as i64 {
        for j in 0..extent as i64 {
            for k in 0..extent as i64 {
                facets.extend(translate_all(base, i * periods[0] + j * periods[1] + k * periods[2]));
            }
        }
    }
    Ok(SigmaComplex::new(facets, &[])?)
}

/// Parameters naming one generator call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default)]
    pub periodic: bool,
}

impl GeneratorSpec {
    pub fn named(name: &str) -> Self {
        GeneratorSpec { name: name.to_string(), m: None, n: None, generation: None, word: None, index: None, periodic: false }
    }

    pub fn sized(name: &str, m: usize, n: usize, periodic: bool) -> Self {
        GeneratorSpec { m: Some(m), n: Some(n), periodic, ..Self::named(name) }
    }
}

pub const GENERATOR_NAMES: [&str; 16] = [
    "eggbox",
    "miura",
    "tube",
    "hollowped",
    "fractal",
    "double-l",
    "miura-weave",
    "link",
    "link-field",
    "butterfly",
    "butterfly-field",
    "dos-equis-layer",
    "dos-equis-stack",
    "dodecahedron",
    "saddle",
    "facet",
];

/// Runs the generator named by a spec. Missing sizes default to 1 (2 for
/// the fields), the word to `"LR"`.
pub fn generate(spec: &GeneratorSpec) -> Result<SigmaComplex, GeneratorError> {
    let m = spec.m.unwrap_or(1);
    let n = spec.n.unwrap_or(m);
    let p = spec.periodic;
    match spec.name.as_str() {
        "eggbox" => eggbox(m, n, p),
        "miura" => miura(m, n, p),
        "tube" => tube(m),
        "hollowped" => hollowped(spec.index.unwrap_or(1)),
        "fractal" => fractal(spec.generation.unwrap_or(0)),
        "double-l" => double_l(),
        "miura-weave" => miura_weave(m, n, p),
        "link" => link(),
        "link-field" => link_field(spec.m.unwrap_or(2), p),
        "butterfly" => butterfly(),
        "butterfly-field" => butterfly_field(spec.m.unwrap_or(2), p),
        "dos-equis-layer" => dos_equis_layer(m, n, p),
        "dos-equis-stack" => dos_equis_stack(spec.word.as_deref().unwrap_or("LR"), p),
        "dodecahedron" => tiling_to_complex(&dodecahedron_cells(Coord4::ZERO)),
        "saddle" => eggbox(1, 1, false),
        "facet" => Ok(SigmaComplex::new([f(Coord4::ZERO, FacetType::T13)], &[])?),
        other => Err(GeneratorError::Unknown(other.to_string())),
    }
}

pub const WEAVE_PERIODS: [Coord4; 2] = [c4(2, -2, 0, 0), c4(0, 0, 2, -2)];

/// Four Double L copies: the original, its translate by `(1,-1,1,-1)` and
/// two `1↔2` mirrors offset along each period direction.
pub fn miura_weave_piece() -> Vec<Facet> {
    let dl = double_l_facets();
    let mut out: Vec<Facet> = dl.clone();
    out.extend(translate_all(&dl, c4(1, -1, 1, -1)));
    for by in [c4(0, 0, 1, -1), c4(1, -1, 0, 0)] {
        out.extend(dl.iter().map(|x| Symmetry::Swap12.apply_facet(x).translated(by)));
    }
    out
}

/// The Miura weave on an `m×n` block of fundamental pieces. The mirrored
/// copies are congruent only when `r1 = r2`, which is recorded as a
/// requirement on the result.
pub fn miura_weave(m: usize, n: usize, periodic: bool) -> Result<SigmaComplex, GeneratorError> {
    let c = doubly(&miura_weave_piece(), WEAVE_PERIODS[0], WEAVE_PERIODS[1], m, n, periodic)?;
    Ok(c.with_requirements([Requirement::R1EqR2]))
}
/// Offset of the mirrored link inside a butterfly. The mirror is the point
/// reflection `x -> -x`, which swaps `H_2` and `H_4` with their opposites.
pub const BUTTERFLY_MIRROR_OFFSET: Coord4 = c4(0, -1, 2, 1);

/// A link, its mirror image and one connecting `Π24`.
pub fn butterfly_facets() -> Vec<Facet> {
    let link: std::collections::BTreeSet<Facet> = link_facets().into_iter().collect();
    let mut out: Vec<Facet> = link.iter().copied().collect();
    out.extend(link.iter().map(|x| x.inverted().translated(BUTTERFLY_MIRROR_OFFSET)));
    out.push(f(c4(0, -1, 1, 0), FacetType::T24));
    out
}

pub fn butterfly() -> Result<SigmaComplex, GeneratorError> {
    Ok(SigmaComplex::new(butterfly_facets(), &[])?)
}

pub const BUTTERFLY_PERIODS: [Coord4; 3] = [c4(-2, -2, 0, 1), c4(-2, -1, 2, 0), c4(0, -2, 2, 1)];
/// Half period: the second butterfly of a cell sits here.
pub const BUTTERFLY_SHIFT: Coord4 = c4(1, 0, 1, 0);

/// Translational cell of the butterfly field: two butterflies a half period
/// apart plus two strips of `Π23` that close the gaps between them.
pub fn butterfly_cell() -> Vec<Facet> {
    let b = butterfly_facets();
    let mut out = b.clone();
    out.extend(translate_all(&b, BUTTERFLY_SHIFT));
    for a in [c4(0, 0, 1, 0), c4(0, 0, 2, 0), c4(0, 0, 3, -1), c4(0, 0, 4, -1)] {
        out.push(f(a, FacetType::T23));
        out.push(f(a + c4(1, 0, 1, 0), FacetType::T23));
    }
    out
}

pub fn butterfly_field(extent: usize, periodic: bool) -> Result<SigmaComplex, GeneratorError> {
    if extent == 0 {
        return Err(GeneratorError::BadSize);
    }
    if periodic {
        let c = SigmaComplex::new(butterfly_cell(), &BUTTERFLY_PERIODS)?;
        let scaled: Vec<Coord4> = BUTTERFLY_PERIODS.iter().map(|p| extent as i64 * *p).collect();
        return Ok(c.with_sublattice(&scaled)?);
    }
    finite_patch(&SigmaComplex::new(butterfly_cell(), &BUTTERFLY_PERIODS)?, extent)
}

/// A finite piece of a periodic complex: `extent` copies of a connected
/// lift along each period. Vertices where the cut pinches the surface get
/// their full stars back.
pub fn finite_patch(field: &SigmaComplex, extent: usize) -> Result<SigmaComplex, GeneratorError> {
    let mut facets: Vec<Facet> = field.unrolled(extent).facets().copied().collect();
    for _ in 0..8 {
        let patch = SigmaComplex::new(facets.iter().copied(), &[])?;
        let report = patch.is_polyhedron();
        if report.ok {
            return Ok(patch);
        }
        for v in report.bad_vertices {
            for x in field.facets() {
                for c in x.corners() {
                    if field.reduce(c) == field.reduce(v) {
                        facets.push(x.translated(v - c));
                    }
                }
            }
        }
    }
    Ok(SigmaComplex::new(facets, &[])?)
}

/// Periods of a Dos Equis layer: forward `2(v1-v2)` and the slanted
/// `v2+v4-v1`, which reverses orientation. The piece meets its translates
/// only across these two and across the gluings below.
pub const DOS_EQUIS_PERIODS: [Coord4; 2] = [c4(2, -2, 0, 0), c4(-1, 1, 0, 1)];

/// Translation placing the next layer on the left. Preserves orientation.
pub const DOS_EQUIS_LEFT: Coord4 = c4(0, 2, -2, -1);
/// Translation placing the next layer on the right. Reverses orientation.
/// It differs from the left gluing by the slanted layer period, so both
/// give the same facets and only the identification parity changes.
pub const DOS_EQUIS_RIGHT: Coord4 = c4(1, 1, -2, -2);

/// Fundamental piece of the layer: the eight facets around a Double X
/// vertex at `(0,0,1,0)` and eight more that complete the cell.
pub fn dos_equis_piece() -> Vec<Facet> {
    use FacetType as T;
    [
        (c4(-1, 0, 1, -1), T::T13),
        (c4(-1, 0, 1, -1), T::T14),
        (c4(-1, 0, 1, 0), T::T13),
        (c4(0, -1, 1, -1), T::T23),
        (c4(0, -1, 1, 0), T::T23),
        (c4(0, -1, 1, 0), T::T24),
        (c4(0, 0, 0, -1), T::T13),
        (c4(0, 0, 0, -1), T::T14),
        (c4(0, 0, 0, -1), T::T23),
        (c4(0, 0, 0, -1), T::T24),
        (c4(0, 0, 0, 0), T::T13),
        (c4(0, 0, 0, 0), T::T23),
        (c4(0, 0, 1, -1), T::T14),
        (c4(0, 0, 1, 0), T::T24),
        (c4(0, 1, 0, -1), T::T14),
        (c4(1, 0, 0, -1), T::T24),
    ]
    .iter()
    .map(|(a, t)| f(*a, *t))
    .collect()
}

/// The layer on an `m×n` block of pieces. The piece is connected only
/// modulo the layer periods, so finite layers are cut from the periodic one.
pub fn dos_equis_layer(m: usize, n: usize, periodic: bool) -> Result<SigmaComplex, GeneratorError> {
    let field = doubly(&dos_equis_piece(), DOS_EQUIS_PERIODS[0], DOS_EQUIS_PERIODS[1], m, n, true)?;
    if periodic {
        Ok(field)
    } else {
        finite_patch(&field, 1)
    }
}

/// Gluing side of one layer onto the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gluing {
    Left,
    Right,
}

impl Gluing {
    pub fn translation(self) -> Coord4 {
        match self {
            Gluing::Left => DOS_EQUIS_LEFT,
            Gluing::Right => DOS_EQUIS_RIGHT,
        }
    }
}

pub fn parse_word(word: &str) -> Result<Vec<Gluing>, GeneratorError> {
    let bad = || GeneratorError::InvalidWord(word.to_string());
    if word.is_empty() {
        return Err(bad());
    }
    word.chars()
        .map(|ch| match ch.to_ascii_uppercase() {
            'L' => Ok(Gluing::Left),
            'R' => Ok(Gluing::Right),
            _ => Err(bad()),
        })
        .collect()
}

/// Layers glued in sequence by the letters of `word`. A periodic stack has
/// one layer per letter and the summed translation as its third period;
/// otherwise there is one more layer than letters and the result keeps only
/// the two layer periods.
pub fn dos_equis_stack(word: &str, periodic: bool) -> Result<SigmaComplex, GeneratorError> {
    let glue = parse_word(word)?;
    let piece = dos_equis_piece();
    let layers = if periodic { glue.len() } else { glue.len() + 1 };
    let mut offset = Coord4::ZERO;
    let mut facets = Vec::new();
    for k in 0..layers {
        facets.extend(translate_all(&piece, offset));
        if k < glue.len() {
            offset = offset + glue[k].translation();
        }
    }
    let mut periods = DOS_EQUIS_PERIODS.to_vec();
    if periodic {
        periods.push(offset);
    }
    Ok(SigmaComplex::new(facets, &periods)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn hollowped_types() {
        let h1: BTreeSet<_> = hollowped_facets(1, Coord4::ZERO).unwrap().iter().map(|x| x.ftype).collect();
        assert_eq!(h1, BTreeSet::from([FacetType::T23, FacetType::T24]));
        let h2 = hollowped_facets(2, Coord4::ZERO).unwrap();
        assert_eq!(h2.len(), 4);
        assert!(h2.iter().all(|x| x.ftype == FacetType::T13 || x.ftype == FacetType::T14));
        assert!(hollowped_facets(5, Coord4::ZERO).is_err());
    }

    #[test]
    fn hollowped_is_a_cylinder() {
        for i in 1..=4 {
            let h = hollowped(i).unwrap();
            assert!(h.is_polyhedron().ok);
            assert_eq!(h.boundary_loops().len(), 2);
        }
    }

    #[test]
    fn overlapping_cells_rejected() {
        let cells = [(Coord4::ZERO, 1), (Coord4::ZERO, 1)];
        assert_eq!(tiling_to_complex(&cells).unwrap_err(), GeneratorError::OverlappingCells(0, 1));
        assert!(tiling_to_complex(&dodecahedron_cells(Coord4::ZERO)).is_ok());
    }

    #[test]
    fn cells_sharing_a_facet_deduplicate() {
        let cells = [(Coord4::ZERO, 1), (e(3), 1)];
        let c = tiling_to_complex(&cells).unwrap();
        assert_eq!(c.len(), 7);
        assert!(c.contains(&f(e(3), FacetType::T24)));
    }

    #[test]
    fn weave_closes_on_its_periods() {
        let w = miura_weave(1, 1, true).unwrap();
        assert_eq!(w.len(), 32);
        assert!(w.is_closed());
        assert!(w.is_polyhedron().ok);
        assert!(w.requirements().contains(&Requirement::R1EqR2));
        let names: BTreeSet<_> = w.vertices().iter().map(|v| w.classify_vertex(*v).unwrap().name).collect();
        assert!(names.contains(&crate::complex::VertexTypeName::DoubleL));
    }

    #[test]
    fn butterfly_has_one_connector() {
        let b = butterfly().unwrap();
        assert_eq!(b.len(), 15);
        assert_eq!(b.facets().filter(|x| x.ftype == FacetType::T24).count(), 1);
        assert!(b.is_polyhedron().ok);
    }

    #[test]
    fn butterfly_field_closes() {
        let c = butterfly_field(1, true).unwrap();
        assert_eq!(c.len(), 30);
        assert!(c.is_closed());
        assert!(c.is_polyhedron().ok);
        let patch = butterfly_field(2, false).unwrap();
        assert!(patch.is_polyhedron().ok, "{:?}", patch.is_polyhedron());
    }

    #[test]
    fn dos_equis_gluings_differ_in_parity() {
        let layer = dos_equis_layer(1, 1, true).unwrap();
        assert!(!layer.is_closed());
        let names: BTreeSet<_> = layer.vertices().iter().filter_map(|v| layer.classify_vertex(*v).ok()).map(|t| t.name).collect();
        assert!(names.contains(&crate::complex::VertexTypeName::DoubleX));
        for w in ["L", "R", "LR", "LLR"] {
            let s = dos_equis_stack(w, true).unwrap();
            assert!(s.is_closed(), "{w}");
            assert!(s.is_polyhedron().ok, "{w}");
        }
        let s = dos_equis_stack("L", true).unwrap();
        assert!(s.translation_preserves_orientation(DOS_EQUIS_LEFT).unwrap());
        assert!(!s.translation_preserves_orientation(DOS_EQUIS_RIGHT).unwrap());
        assert!(dos_equis_stack("LR", false).unwrap().is_polyhedron().ok);
        assert_eq!(dos_equis_stack("", false).unwrap_err(), GeneratorError::InvalidWord(String::new()));
        assert!(matches!(dos_equis_stack("LX", true), Err(GeneratorError::InvalidWord(_))));
    }

    #[test]
    fn unknown_generator() {
        assert!(matches!(generate(&GeneratorSpec::named("nope")), Err(GeneratorError::Unknown(_))));
    }
}
