use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

/// An error response: HTTP status plus a short code and a readable reason.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub reason: String,
}

#[derive(Serialize)]
struct Body<'a> {
    error: &'a str,
    reason: &'a str,
}

impl ApiError {
    pub fn bad_request(reason: impl Into<String>) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, code: "BadRequest", reason: reason.into() }
    }

    pub fn conflict(code: &'static str, reason: impl Into<String>) -> Self {
        ApiError { status: StatusCode::CONFLICT, code, reason: reason.into() }
    }

    pub fn not_found(id: &str) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, code: "NotFound", reason: format!("no session {id:?}") }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}: {}", self.status.as_u16(), self.code, self.reason)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(Body { error: self.code, reason: &self.reason })).into_response()
    }
}
