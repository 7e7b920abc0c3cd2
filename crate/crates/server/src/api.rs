//! REST endpoints over a shared store.
//!
//! | method | path                | body / query                                  |
//! |--------|---------------------|-----------------------------------------------|
//! | GET    | `/api/search`       | `keyword`, `node_limit`, `rel_limit`          |
//! | GET    | `/api/node/{id}`    |                                               |
//! | POST   | `/api/expand`       | `{node_id, visible_ids, visible_link_ids?}`   |
//! | POST   | `/api/ai-introduce` | `{node_id}`                                   |
//! | GET    | `/api/stats`        |                                               |
//!
//! Errors are `{"error": {"code": ..., "message": ...}}`.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use kgatlas_core::analysis::{self, AnalysisError, AnalysisReport};
use kgatlas_core::explore::{self, ExpandRequest, ExploreError, NodeDetail, SearchRequest};
use kgatlas_core::graph::{GraphView, NodeId, SharedStore, Stats};
use kgatlas_core::ingest::providers::LanguageModel;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

#[derive(Clone)]
pub struct AppState {
    pub store: SharedStore,
    pub lm: Arc<dyn LanguageModel>,
    pub timeout: Duration,
    pub max_limit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntroduceRequest {
    pub node_id: NodeId,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid-request", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"error": {"code": self.code, "message": self.message}});
        (self.status, Json(body)).into_response()
    }
}

impl From<ExploreError> for ApiError {
    fn from(e: ExploreError) -> Self {
        let (status, code) = match e {
            ExploreError::EmptyKeyword | ExploreError::LimitOutOfRange { .. } => {
                (StatusCode::BAD_REQUEST, "invalid-request")
            }
            ExploreError::NotVisible(_) => (StatusCode::BAD_REQUEST, "not-visible"),
            ExploreError::NodeNotFound(_) => (StatusCode::NOT_FOUND, "node-not-found"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl From<AnalysisError> for ApiError {
    fn from(e: AnalysisError) -> Self {
        let (status, code) = match e {
            AnalysisError::NodeNotFound(_) => (StatusCode::NOT_FOUND, "node-not-found"),
            AnalysisError::NotAProduct { .. } => {
                (StatusCode::UNPROCESSABLE_ENTITY, "not-a-product")
            }
            AnalysisError::Timeout(_) => (StatusCode::GATEWAY_TIMEOUT, "analysis-timeout"),
            AnalysisError::Provider(_) => (StatusCode::BAD_GATEWAY, "provider-error"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(e.status(), "invalid-request", e.body_text())
    }
}

/// Runs store work off the async executor.
async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
}

pub fn router(state: AppState, ui_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/search", get(search))
        .route("/api/node/{id}", get(node))
        .route("/api/expand", post(expand))
        .route("/api/ai-introduce", post(introduce))
        .route("/api/stats", get(stats))
        .route("/api/{*rest}", get(unknown).post(unknown))
        .with_state(state);
    match ui_dir {
        Some(dir) if dir.is_dir() => api.fallback_service(ServeDir::new(dir)),
        _ => api,
    }
}

async fn unknown() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not-found", "no such endpoint")
}

fn limit_param(q: &HashMap<String, String>, name: &str) -> Result<usize, ApiError> {
    match q.get(name) {
        None => Ok(explore::DEFAULT_LIMIT),
        Some(v) => v.trim().parse().map_err(|_| {
            ApiError::bad_request(format!("{name} must be a positive integer, got `{v}`"))
        }),
    }
}

pub fn parse_search(q: &HashMap<String, String>) -> Result<SearchRequest, ApiError> {
    Ok(SearchRequest {
        keyword: q.get("keyword").cloned().unwrap_or_default(),
        node_limit: limit_param(q, "node_limit")?,
        rel_limit: limit_param(q, "rel_limit")?,
    })
}

async fn search(
    State(s): State<AppState>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Json<GraphView>, ApiError> {
    let req = parse_search(&q)?;
    blocking(move || Ok(explore::search(&s.store.read(), &req, s.max_limit)?))
        .await
        .map(Json)
}

async fn node(
    State(s): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<NodeDetail>, ApiError> {
    let id: u64 = id
        .parse()
        .map_err(|_| ApiError::bad_request(format!("node id must be an integer, got `{id}`")))?;
    blocking(move || Ok(explore::node_detail(&s.store.read(), NodeId(id))?))
        .await
        .map(Json)
}

async fn expand(
    State(s): State<AppState>,
    body: Result<Json<ExpandRequest>, JsonRejection>,
) -> Result<Json<GraphView>, ApiError> {
    let Json(req) = body?;
    blocking(move || Ok(explore::expand(&s.store.read(), &req)?))
        .await
        .map(Json)
}

async fn introduce(
    State(s): State<AppState>,
    body: Result<Json<IntroduceRequest>, JsonRejection>,
) -> Result<Json<AnalysisReport>, ApiError> {
    let Json(req) = body?;
    blocking(move || {
        let ctx = analysis::extract_context(&s.store.read(), req.node_id)?;
        Ok(analysis::introduce(&ctx, s.lm.clone(), s.timeout)?)
    })
    .await
    .map(Json)
}

async fn stats(State(s): State<AppState>) -> Result<Json<Stats>, ApiError> {
    blocking(move || Ok(s.store.read().stats())).await.map(Json)
}
