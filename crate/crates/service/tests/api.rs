use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use sigmafold_service::{router, AppState};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn json_call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (s, text) = call(app, method, uri, body).await;
    (s, serde_json::from_str(&text).unwrap_or(Value::Null))
}

async fn new_session(app: &Router, body: Option<Value>) -> String {
    let (s, v) = json_call(app, "POST", "/api/session", body).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_string()
}

fn app() -> Router {
    router(AppState::new())
}

#[tokio::test]
async fn lone_facet_edges_have_three_candidates() {
    let app = app();
    let id = new_session(&app, None).await;
    // Π13 at the origin: edges (0,1), (e1,3), (e3,1), (0,3).
    for (tail, dir) in [("0,0,0,0", 1), ("1,0,0,0", 3), ("0,0,1,0", 1), ("0,0,0,0", 3)] {
        let (s, v) = json_call(&app, "GET", &format!("/api/session/{id}/legal-moves?tail={tail}&dir={dir}"), None).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        let cands = v["candidates"].as_array().unwrap();
        assert_eq!(cands.len(), 3);
        assert!(cands.iter().all(|c| c["collision"] == json!(false)));
    }
}

#[tokio::test]
async fn extend_then_undo_restores_document_bytes() {
    let app = app();
    let id = new_session(&app, None).await;
    let (_, before) = call(&app, "GET", &format!("/api/session/{id}/complex"), None).await;
    let (_, moves) = json_call(&app, "GET", &format!("/api/session/{id}/legal-moves?tail=0,0,0,0&dir=1"), None).await;
    let facet = moves["candidates"][0]["facet"].clone();
    let (s, doc) = json_call(&app, "POST", &format!("/api/session/{id}/extend"), Some(json!({ "facet": facet }))).await;
    assert_eq!(s, StatusCode::OK, "{doc}");
    assert_eq!(doc["facets"].as_array().unwrap().len(), 2);
    let (s, after_undo) = call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(after_undo, before);
    let (s, v) = json_call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error"], "NothingToUndo");
}

#[tokio::test]
async fn rejected_moves_leave_state_unchanged() {
    let app = app();
    let id = new_session(&app, None).await;
    let (_, before) = call(&app, "GET", &format!("/api/session/{id}/complex"), None).await;
    let cases = [
        (json!({ "facet": { "anchor": [0, 0, 0, 0], "type": [1, 2] } }), "ForbiddenFacet"),
        (json!({ "facet": { "anchor": [0, 0, 0, 0], "type": [1, 3] } }), "Duplicate"),
        (json!({ "facet": { "anchor": [5, 5, 5, 5], "type": [1, 3] } }), "NotAttached"),
    ];
    for (body, code) in cases {
        let (s, v) = json_call(&app, "POST", &format!("/api/session/{id}/extend"), Some(body)).await;
        assert_eq!(s, StatusCode::CONFLICT);
        assert_eq!(v["error"], code);
        let (_, now) = call(&app, "GET", &format!("/api/session/{id}/complex"), None).await;
        assert_eq!(now, before);
    }
}

#[tokio::test]
async fn third_facet_on_an_edge_is_rejected() {
    let app = app();
    let id = new_session(&app, None).await;
    let add = |anchor: [i64; 4], t: [u8; 2]| json!({ "facet": { "anchor": anchor, "type": t } });
    // Π14 and Π13 at the origin share the edge (0, dir 1).
    let (s, _) = json_call(&app, "POST", &format!("/api/session/{id}/extend"), Some(add([0, 0, 0, 0], [1, 4]))).await;
    assert_eq!(s, StatusCode::OK);
    let (s, v) = json_call(&app, "POST", &format!("/api/session/{id}/extend"), Some(add([0, 0, -1, 0], [1, 3]))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error"], "NonManifoldEdge");
    let (s, v) = json_call(&app, "GET", &format!("/api/session/{id}/legal-moves?tail=0,0,0,0&dir=1"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error"], "NotBoundaryEdge");
}

#[tokio::test]
async fn vertex_type_seed_classifies() {
    let app = app();
    let id = new_session(&app, Some(json!({ "vertex_type": "Double X" }))).await;
    let (s, v) = json_call(&app, "GET", &format!("/api/session/{id}/classify"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["facets"], 8);
    assert_eq!(v["census"]["types"]["Double X"], 1);
    let (s, _) = json_call(&app, "POST", "/api/session", Some(json!({ "vertex_type": "Hexagon" }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn mesh_flattens_toward_the_endpoint() {
    let app = app();
    let id = new_session(&app, Some(json!({ "vertex_type": "Miura" }))).await;
    let max_x = |v: &Value| v["vertices"].as_array().unwrap().iter().map(|p| p[0].as_f64().unwrap().abs()).fold(0.0, f64::max);
    let (s, mid) = json_call(&app, "GET", &format!("/api/session/{id}/mesh?t=0.5"), None).await;
    assert_eq!(s, StatusCode::OK);
    let (_, late) = json_call(&app, "GET", &format!("/api/session/{id}/mesh?t=0.95"), None).await;
    assert!(max_x(&late) < 0.1 * max_x(&mid) + 1e-12 || max_x(&late) < max_x(&mid));
    assert_eq!(mid["quads"].as_array().unwrap().len(), 4);
    let types = mid["vertex_types"].as_array().unwrap();
    assert_eq!(types.iter().filter(|t| **t == json!("Miura")).count(), 1);
    let (s, _) = json_call(&app, "GET", &format!("/api/session/{id}/mesh?t=1.5"), None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn collisions_endpoint_reports_sweep() {
    let app = app();
    let id = new_session(&app, Some(json!({ "vertex_type": "Saddle" }))).await;
    let (s, v) = json_call(&app, "GET", &format!("/api/session/{id}/collisions?steps=10"), None).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["hits"].as_array().unwrap().len(), 0);
    assert_eq!(v["steps"], 10);
}

#[tokio::test]
async fn unknown_session_and_malformed_input() {
    let app = app();
    let (s, v) = json_call(&app, "GET", "/api/session/nope/complex", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["error"], "NotFound");
    let id = new_session(&app, None).await;
    let (s, _) = json_call(&app, "GET", &format!("/api/session/{id}/legal-moves?tail=0,0,0&dir=1"), None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = json_call(&app, "GET", &format!("/api/session/{id}/legal-moves?tail=0,0,0,0&dir=7"), None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = call(&app, "POST", &format!("/api/session/{id}/extend"), Some(json!({ "nope": 1 }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = call(&app, "POST", "/api/session", Some(json!({ "star": { "r": [1, 1, 1, 1], "lambda": 2.0 } }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn saved_document_seeds_a_session() {
    let app = app();
    let id = new_session(&app, Some(json!({ "vertex_type": "Peak" }))).await;
    let (_, doc) = json_call(&app, "GET", &format!("/api/session/{id}/complex"), None).await;
    let id2 = new_session(&app, Some(json!({ "document": doc }))).await;
    let (_, a) = call(&app, "GET", &format!("/api/session/{id}/complex"), None).await;
    let (_, b) = call(&app, "GET", &format!("/api/session/{id2}/complex"), None).await;
    assert_eq!(a, b);
}

#[tokio::test]
async fn uncolliding_candidates_are_accepted() {
    let app = app();
    let id = new_session(&app, Some(json!({ "vertex_type": "Double L" }))).await;
    let (_, doc) = json_call(&app, "GET", &format!("/api/session/{id}/complex"), None).await;
    let mut accepted = 0;
    for f in doc["facets"].as_array().unwrap() {
        let a: Vec<i64> = f["anchor"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        let dir = f["type"][0].as_u64().unwrap();
        let tail = format!("{},{},{},{}", a[0], a[1], a[2], a[3]);
        let (s, moves) = json_call(&app, "GET", &format!("/api/session/{id}/legal-moves?tail={tail}&dir={dir}"), None).await;
        if s != StatusCode::OK {
            continue;
        }
        for c in moves["candidates"].as_array().unwrap() {
            if c["collision"] == json!(false) {
                let (s, v) = json_call(&app, "POST", &format!("/api/session/{id}/extend"), Some(json!({ "facet": c["facet"] }))).await;
                assert_eq!(s, StatusCode::OK, "{v}");
                accepted += 1;
                let (s, _) = call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
                assert_eq!(s, StatusCode::OK);
            }
        }
    }
    assert!(accepted > 0);
}
