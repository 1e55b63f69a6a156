//! Complex documents (JSON), OBJ export and import, and fold animations.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, Facet, FacetType, RawMesh, Requirement, SigmaComplex};
use crate::generators::GeneratorSpec;
use crate::geometry::{realize, GeometryError, Mesh};
use crate::lattice::Coord4;
use crate::star::{alpha_of_t, StarError, StarParams};

pub const FORMAT: &str = "sigmafold-complex";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse { line: usize, column: usize, reason: String },
    #[error("unsupported document version {0} (expected {VERSION})")]
    VersionMismatch(u32),
    #[error("not a complex document (format {0:?})")]
    WrongFormat(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("need at least 2 frames, got {0}")]
    TooFewFrames(usize),
    #[error("obj line {line}: {reason}")]
    Obj { line: usize, reason: String },
    #[error(transparent)]
    Fs(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarDoc {
    pub r: [f64; 4],
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetDoc {
    pub anchor: [i64; 4],
    #[serde(rename = "type")]
    pub ftype: [u8; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(default)]
    pub requirements: Vec<Requirement>,
}

/// On-disk form of a complex together with its star parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub format: String,
    pub version: u32,
    pub star: StarDoc,
    pub facets: Vec<FacetDoc>,
    #[serde(default)]
    pub periods: Vec<[i64; 4]>,
    #[serde(default)]
    pub metadata: Metadata,
}

impl ComplexDocument {
    pub fn new(complex: &SigmaComplex, params: &StarParams, generator: Option<&GeneratorSpec>) -> Self {
        ComplexDocument {
            format: FORMAT.to_string(),
            version: VERSION,
            star: StarDoc { r: params.r(), lambda: params.lambda() },
            facets: complex.facets().map(|f| FacetDoc { anchor: f.anchor.0, ftype: f.ftype.pair() }).collect(),
            periods: complex.periods().iter().map(|p| p.0).collect(),
            metadata: Metadata { generator: generator.cloned(), requirements: complex.requirements().iter().copied().collect() },
        }
    }

    pub fn to_complex(&self) -> Result<(SigmaComplex, StarParams), IoError> {
        if self.format != FORMAT {
            return Err(IoError::WrongFormat(self.format.clone()));
        }
        if self.version != VERSION {
            return Err(IoError::VersionMismatch(self.version));
        }
        let params = StarParams::new(self.star.r, self.star.lambda)?;
        let facets = self
            .facets
            .iter()
            .map(|d| Ok(Facet::new(d.anchor, FacetType::new(d.ftype[0], d.ftype[1])?)))
            .collect::<Result<Vec<_>, ComplexError>>()?;
        let periods: Vec<Coord4> = self.periods.iter().map(|p| Coord4(*p)).collect();
        let c = SigmaComplex::new(facets, &periods)?.with_requirements(self.metadata.requirements.iter().copied());
        Ok((c, params))
    }
}

/// Pretty-printed JSON with facets in canonical order.
pub fn serialize(complex: &SigmaComplex, params: &StarParams, generator: Option<&GeneratorSpec>) -> String {
    let doc = ComplexDocument::new(complex, params, generator);
    let mut s = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn parse_document(text: &str) -> Result<ComplexDocument, IoError> {
    // Check the version before the full schema so old documents get a
    // clear message.
    #[derive(Deserialize)]
    struct Head {
        version: Option<u32>,
    }
    let parse_err = |e: serde_json::Error| IoError::Parse { line: e.line(), column: e.column(), reason: e.to_string() };
    let head: Head = serde_json::from_str(text).map_err(parse_err)?;
    if let Some(v) = head.version {
        if v != VERSION {
            return Err(IoError::VersionMismatch(v));
        }
    }
    serde_json::from_str(text).map_err(parse_err)
}

pub fn parse(text: &str) -> Result<(SigmaComplex, StarParams), IoError> {
    parse_document(text)?.to_complex()
}

/// `%.{sig}g`-style formatting without trailing zeros.
fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (_, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        let (mant, _) = sci.split_once('e').unwrap();
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        return format!("{mant}e{exp}");
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" { "0".to_string() } else { s }
}

/// Wavefront OBJ: vertices in sorted coordinate order, then one quad per
/// facet with 1-based indices.
pub fn export_obj(mesh: &Mesh) -> String {
    raw_to_obj(&mesh.to_raw())
}

pub fn raw_to_obj(raw: &RawMesh) -> String {
    let mut out = String::new();
    for p in &raw.positions {
        let _ = writeln!(out, "v {} {} {}", fmt_sig(p[0], 12), fmt_sig(p[1], 12), fmt_sig(p[2], 12));
    }
    for q in &raw.quads {
        let _ = writeln!(out, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
    }
    out
}

/// Reads `v` and `f` records; other records are ignored. Face entries may
/// use the `v/vt/vn` form.
pub fn import_obj(text: &str) -> Result<RawMesh, IoError> {
    let mut mesh = RawMesh::default();
    for (ln, line) in text.lines().enumerate() {
        let bad = |reason: &str| IoError::Obj { line: ln + 1, reason: reason.to_string() };
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let xs: Vec<f64> = parts.take(3).map(|t| t.parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad("bad coordinate"))?;
                if xs.len() != 3 {
                    return Err(bad("vertex needs three coordinates"));
                }
                mesh.positions.push([xs[0], xs[1], xs[2]]);
            }
            Some("f") => {
                let idx: Vec<usize> = parts
                    .map(|t| t.split('/').next().unwrap_or("").parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad("bad face index"))?;
                if idx.len() != 4 || idx.iter().any(|&i| i == 0 || i > mesh.positions.len()) {
                    return Err(bad("faces must be quads with valid 1-based indices"));
                }
                mesh.quads.push([idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1]);
            }
            _ => {}
        }
    }
    Ok(mesh)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub frame: usize,
    pub t: f64,
    pub alpha_radians: f64,
    pub file: String,
}

/// Fold parameters of `frames` uniform samples in `[margin, 1-margin]`.
pub fn animation_times(frames: usize, margin: f64) -> Result<Vec<f64>, IoError> {
    if frames < 2 {
        return Err(IoError::TooFewFrames(frames));
    }
    Ok((0..frames).map(|k| margin + (1.0 - 2.0 * margin) * k as f64 / (frames - 1) as f64).collect())
}

/// Writes `frame_NNN.obj` for each fold parameter plus `manifest.json`.
pub fn export_animation_at(
    complex: &SigmaComplex,
    params: &StarParams,
    times: &[f64],
    dir: &Path,
    extent: usize,
) -> Result<Vec<FrameRecord>, IoError> {
    if times.len() < 2 {
        return Err(IoError::TooFewFrames(times.len()));
    }
    fs::create_dir_all(dir)?;
    let mut manifest = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let mesh = realize(complex, params, t, extent)?;
        let name = format!("frame_{k:03}.obj");
        let path: PathBuf = dir.join(&name);
        fs::write(&path, export_obj(&mesh))?;
        manifest.push(FrameRecord { frame: k, t, alpha_radians: alpha_of_t(params.lambda(), t)?, file: name });
    }
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(manifest)
}

pub fn export_animation(
    complex: &SigmaComplex,
    params: &StarParams,
    frames: usize,
    dir: &Path,
    margin: f64,
    extent: usize,
) -> Result<Vec<FrameRecord>, IoError> {
    let times = animation_times(frames, margin)?;
    export_animation_at(complex, params, &times, dir, extent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(-0.0, 12), "0");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(fmt_sig(-2.0f64.sqrt(), 12), "-1.41421356237");
        assert_eq!(fmt_sig(123456.5, 12), "123456.5");
        assert_eq!(fmt_sig(1.5e-17, 12), "1.5e-17");
        assert_eq!(fmt_sig(-1e-20, 12), "-1e-20");
    }

    #[test]
    fn version_mismatch() {
        let text = r#"{"format":"sigmafold-complex","version":7,"star":{"r":[1,1,1,1],"lambda":0.3},"facets":[]}"#;
        assert!(matches!(parse(text), Err(IoError::VersionMismatch(7))));
    }

    #[test]
    fn forbidden_type_in_document() {
        let text = r#"{"format":"sigmafold-complex","version":1,"star":{"r":[1,1,1,1],"lambda":0.3},
            "facets":[{"anchor":[0,0,0,0],"type":[1,2]}]}"#;
        assert!(matches!(parse(text), Err(IoError::Complex(ComplexError::ForbiddenFacet(1, 2)))));
    }

    #[test]
    fn truncated_document_reports_position() {
        let c = SigmaComplex::new([Facet::new([0; 4], FacetType::T13)], &[]).unwrap();
        let s = serialize(&c, &StarParams::tetrahedral(), None);
        let cut = &s[..s.len() / 2];
        match parse(cut) {
            Err(IoError::Parse { line, .. }) => assert!(line > 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn obj_import_rejects_triangles() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";
        assert!(matches!(import_obj(text), Err(IoError::Obj { line: 4, .. })));
    }

    #[test]
    fn one_frame_is_an_error() {
        assert!(matches!(animation_times(1, 0.02), Err(IoError::TooFewFrames(1))));
    }
}
