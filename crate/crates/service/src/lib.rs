//! JSON-over-HTTP design sessions.
//!
//! A session holds one complex and an undo stack. Clients grow the complex
//! one facet at a time: they ask for the legal moves along a boundary edge,
//! then extend with one of them. Every mutation is validated first, so a
//! rejected request leaves the session untouched.

mod error;
mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use sigmafold_core::geometry::SweepOptions;
use sigmafold_core::{Coord4, Edge};
use tower_http::cors::CorsLayer;

pub use error::ApiError;
pub use session::{
    Candidate, Classification, CreateRequest, ExtendRequest, FacetRequest, LegalMoves, MeshView, Session, DEFAULT_T,
};

type Shared = Arc<Mutex<Session>>;

/// All live sessions. Each session has its own lock, so edits to one never
/// wait on another.
#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Shared>>>,
    next: Arc<AtomicU64>,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    fn get(&self, id: &str) -> Result<Shared, ApiError> {
        self.sessions.read().expect("session map lock").get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    fn insert(&self, s: Session) -> Shared {
        let id = s.id.clone();
        let shared = Arc::new(Mutex::new(s));
        self.sessions.write().expect("session map lock").insert(id, shared.clone());
        shared
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/session", post(create))
        .route("/api/session/{id}/complex", get(complex))
        .route("/api/session/{id}/legal-moves", get(legal_moves))
        .route("/api/session/{id}/extend", post(extend))
        .route("/api/session/{id}/undo", post(undo))
        .route("/api/session/{id}/mesh", get(mesh))
        .route("/api/session/{id}/collisions", get(collisions))
        .route("/api/session/{id}/classify", get(classify))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Serves the API until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new())).await
}

fn lock(s: &Shared) -> std::sync::MutexGuard<'_, Session> {
    s.lock().unwrap_or_else(|e| e.into_inner())
}

fn json_body<T: for<'de> Deserialize<'de> + Default>(body: &Bytes) -> Result<T, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

fn document_response(status: StatusCode, text: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], text).into_response()
}

#[derive(Serialize)]
struct Created {
    id: String,
    document: serde_json::Value,
}

async fn create(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = json_body(&body)?;
    let id = format!("s{}", state.next.fetch_add(1, Ordering::Relaxed) + 1);
    let s = Session::create(id.clone(), req)?;
    let document = serde_json::from_str(&s.document()).expect("serialized documents are JSON");
    state.insert(s);
    Ok((StatusCode::CREATED, Json(Created { id, document })).into_response())
}

async fn complex(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = state.get(&id)?;
    let text = lock(&s).document();
    Ok(document_response(StatusCode::OK, text))
}

#[derive(Deserialize)]
struct MovesQuery {
    tail: String,
    dir: u8,
    t: Option<f64>,
}

fn parse_coord(s: &str) -> Result<Coord4, ApiError> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| ApiError::bad_request(format!("tail must be four integers a,b,c,d, got {s:?}")))?;
    let arr: [i64; 4] = parts.try_into().map_err(|_| ApiError::bad_request(format!("tail must have four entries, got {s:?}")))?;
    Ok(Coord4(arr))
}

async fn legal_moves(State(state): State<AppState>, Path(id): Path<String>, Query(q): Query<MovesQuery>) -> Result<Json<LegalMoves>, ApiError> {
    let s = state.get(&id)?;
    if !(1..=4).contains(&q.dir) {
        return Err(ApiError::bad_request(format!("dir must be 1..=4, got {}", q.dir)));
    }
    let edge = Edge::new(parse_coord(&q.tail)?, q.dir as usize);
    let moves = lock(&s).legal_moves(edge, q.t)?;
    Ok(Json(moves))
}

async fn extend(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    let s = state.get(&id)?;
    let req: ExtendRequest = serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))?;
    let mut guard = lock(&s);
    guard.extend(&req)?;
    Ok(document_response(StatusCode::OK, guard.document()))
}

async fn undo(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = state.get(&id)?;
    let mut guard = lock(&s);
    guard.undo()?;
    Ok(document_response(StatusCode::OK, guard.document()))
}

#[derive(Deserialize)]
struct MeshQuery {
    t: Option<f64>,
    extent: Option<usize>,
}

async fn mesh(State(state): State<AppState>, Path(id): Path<String>, Query(q): Query<MeshQuery>) -> Result<Json<MeshView>, ApiError> {
    let s = state.get(&id)?;
    let snapshot = lock(&s).clone();
    let extent = q.extent.unwrap_or(2);
    let view = tokio::task::spawn_blocking(move || snapshot.mesh(q.t, extent)).await.expect("mesh task")?;
    Ok(Json(view))
}

#[derive(Deserialize)]
struct SweepQuery {
    steps: Option<usize>,
    margin: Option<f64>,
    extent: Option<usize>,
}

async fn collisions(State(state): State<AppState>, Path(id): Path<String>, Query(q): Query<SweepQuery>) -> Result<Response, ApiError> {
    let s = state.get(&id)?;
    let snapshot = lock(&s).clone();
    let mut opts = SweepOptions::with_margin(q.margin.unwrap_or(0.02));
    opts.steps = q.steps.unwrap_or(50);
    opts.extent = q.extent.unwrap_or(opts.extent);
    let report = tokio::task::spawn_blocking(move || snapshot.collisions(&opts)).await.expect("sweep task")?;
    Ok(Json(report).into_response())
}

async fn classify(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Classification>, ApiError> {
    let s = state.get(&id)?;
    let snapshot = lock(&s).clone();
    Ok(Json(snapshot.classify()))
}
