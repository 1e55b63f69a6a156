use serde::{Deserialize, Serialize};
use sigmafold_core::complex::{vertex_type_by_name, ComplexError, VertexCensus, VertexTypeName};
use sigmafold_core::geometry::{self, CollisionReport, SweepOptions};
use sigmafold_core::io::{self, ComplexDocument, StarDoc};
use sigmafold_core::{Coord4, Edge, Facet, FacetType, SigmaComplex, StarParams};

use crate::error::ApiError;

/// Preview fold parameter used when a request does not name one.
pub const DEFAULT_T: f64 = 0.5;
/// Periods replicated on each side when checking a placement.
const PLACEMENT_EXTENT: usize = 1;

/// One design session: the current complex plus everything it replaced.
#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub params: StarParams,
    pub complex: SigmaComplex,
    pub t: f64,
    history: Vec<SigmaComplex>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub star: Option<StarDoc>,
    /// Seed with the vertex figure of this catalog type instead of a facet.
    pub vertex_type: Option<String>,
    /// Start from a saved document.
    pub document: Option<ComplexDocument>,
    pub t: Option<f64>,
}

/// A facet as sent by clients. The type is checked separately so a
/// forbidden pair is a rejected move rather than a malformed request.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct FacetRequest {
    pub anchor: Coord4,
    #[serde(rename = "type")]
    pub ftype: [u8; 2],
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExtendRequest {
    pub facet: FacetRequest,
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub facet: Facet,
    pub collision: bool,
    pub collides_with: Vec<Facet>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LegalMoves {
    pub edge: Edge,
    pub t: f64,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeshView {
    pub t: f64,
    pub alpha: f64,
    pub vertices: Vec<[f64; 3]>,
    pub coords: Vec<Coord4>,
    pub quads: Vec<[usize; 4]>,
    pub facet_types: Vec<FacetType>,
    /// Catalog name per vertex, or null on the boundary.
    pub vertex_types: Vec<Option<VertexTypeName>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub facets: usize,
    pub census: VertexCensus,
    pub curvature_sum: f64,
}

pub(crate) fn check_t(t: f64) -> Result<f64, ApiError> {
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err(ApiError::bad_request(format!("t must lie strictly between 0 and 1, got {t}")))
    }
}

impl Session {
    pub fn create(id: String, req: CreateRequest) -> Result<Session, ApiError> {
        let t = check_t(req.t.unwrap_or(DEFAULT_T))?;
        let star = |s: &StarDoc| StarParams::new(s.r, s.lambda).map_err(|e| ApiError::bad_request(e.to_string()));
        let (complex, params) = match (&req.document, &req.vertex_type) {
            (Some(_), Some(_)) => return Err(ApiError::bad_request("give either a document or a vertex type, not both")),
            (Some(doc), None) => {
                let (c, p) = doc.to_complex().map_err(|e| ApiError::bad_request(e.to_string()))?;
                (c, req.star.as_ref().map(star).transpose()?.unwrap_or(p))
            }
            (None, Some(name)) => {
                let vt = VertexTypeName::parse(name)
                    .map(vertex_type_by_name)
                    .ok_or_else(|| ApiError::bad_request(format!("unknown vertex type {name:?}")))?;
                let c = SigmaComplex::new(vt.figure(Coord4::ZERO), &[]).map_err(ApiError::from)?;
                (c, req.star.as_ref().map(star).transpose()?.unwrap_or_else(StarParams::tetrahedral))
            }
            (None, None) => {
                let c = SigmaComplex::new([Facet::new(Coord4::ZERO, FacetType::T13)], &[]).map_err(ApiError::from)?;
                (c, req.star.as_ref().map(star).transpose()?.unwrap_or_else(StarParams::tetrahedral))
            }
        };
        Ok(Session { id, params, complex, t, history: Vec::new() })
    }

    pub fn document(&self) -> String {
        io::serialize(&self.complex, &self.params, None)
    }

    pub fn legal_moves(&self, edge: Edge, t: Option<f64>) -> Result<LegalMoves, ApiError> {
        let t = check_t(t.unwrap_or(self.t))?;
        let facets = self.complex.legal_extensions(edge)?;
        let mut candidates = Vec::with_capacity(facets.len());
        for facet in facets {
            let collides_with = self.collisions_for(&facet, t)?;
            candidates.push(Candidate { facet, collision: !collides_with.is_empty(), collides_with });
        }
        Ok(LegalMoves { edge, t, candidates })
    }

    fn collisions_for(&self, facet: &Facet, t: f64) -> Result<Vec<Facet>, ApiError> {
        geometry::placement_collisions(&self.complex, facet, &self.params, t, PLACEMENT_EXTENT).map_err(|e| ApiError::bad_request(e.to_string()))
    }

    /// Adds a facet, gated by the structural checks and a collision test at
    /// the preview parameter. Nothing changes on failure.
    pub fn extend(&mut self, req: &ExtendRequest) -> Result<(), ApiError> {
        let t = check_t(req.t.unwrap_or(self.t))?;
        let ftype = FacetType::new(req.facet.ftype[0], req.facet.ftype[1])?;
        let facet = Facet::new(req.facet.anchor, ftype);
        let next = self.complex.extend(facet)?;
        let hits = self.collisions_for(&facet, t)?;
        if !hits.is_empty() {
            let list: Vec<String> = hits.iter().map(|f| f.to_string()).collect();
            return Err(ApiError::conflict("Collision", format!("{facet} meets {} at t={t}", list.join(", "))));
        }
        self.history.push(std::mem::replace(&mut self.complex, next));
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), ApiError> {
        let prev = self.history.pop().ok_or_else(|| ApiError::conflict("NothingToUndo", "the session is at its initial state"))?;
        self.complex = prev;
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.history.len()
    }

    pub fn mesh(&self, t: Option<f64>, extent: usize) -> Result<MeshView, ApiError> {
        let t = check_t(t.unwrap_or(self.t))?;
        let m = geometry::realize(&self.complex, &self.params, t, extent).map_err(|e| ApiError::bad_request(e.to_string()))?;
        let raw = m.to_raw();
        let coords: Vec<Coord4> = m.vertices.keys().copied().collect();
        let vertex_types = coords.iter().map(|c| self.complex.classify_vertex(*c).ok().map(|v| v.name)).collect();
        Ok(MeshView {
            t,
            alpha: m.state.alpha(),
            vertices: raw.positions,
            coords,
            quads: raw.quads,
            facet_types: m.facets.iter().map(|f| f.ftype).collect(),
            vertex_types,
        })
    }

    pub fn collisions(&self, opts: &SweepOptions) -> Result<CollisionReport, ApiError> {
        geometry::collision_sweep(&self.complex, &self.params, opts).map_err(|e| ApiError::bad_request(e.to_string()))
    }

    pub fn classify(&self) -> Classification {
        let census = self.complex.vertex_census();
        let gamma = self.params.gamma();
        let curvature_sum = census
            .types
            .iter()
            .map(|(name, n)| vertex_type_by_name(*name).curvature(gamma) * *n as f64)
            .sum();
        Classification { facets: self.complex.len(), census, curvature_sum }
    }
}

impl From<ComplexError> for ApiError {
    fn from(e: ComplexError) -> Self {
        let code = match &e {
            ComplexError::ForbiddenFacet(..) => "ForbiddenFacet",
            ComplexError::Duplicate(_) => "Duplicate",
            ComplexError::NonManifoldEdge(_) => "NonManifoldEdge",
            ComplexError::NotAttached(_) => "NotAttached",
            ComplexError::NotBoundaryEdge(_) => "NotBoundaryEdge",
            _ => "Invalid",
        };
        ApiError::conflict(code, e.to_string())
    }
}
