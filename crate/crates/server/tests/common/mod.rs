#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use kgatlas_core::graph::{GraphStore, SharedStore};
use kgatlas_core::ingest::mock::MockLanguageModel;
use kgatlas_core::ingest::providers::{LanguageModel, ProviderFailure};
use kgatlas_core::ingest::{ProductQuery, WebPage};
use kgatlas_server::api::{router, AppState};
use serde_json::Value;
use tower::ServiceExt;

/// Delegates everything to the mock except `introduce`, which fails or
/// stalls.
pub enum Faulty {
    Down,
    Slow(Duration),
}

impl LanguageModel for Faulty {
    fn model_id(&self) -> String {
        "faulty".into()
    }
    fn extract_keywords(&self, q: &ProductQuery) -> Result<Vec<String>, ProviderFailure> {
        MockLanguageModel::default().extract_keywords(q)
    }
    fn extract_product(&self, p: &WebPage) -> Result<String, ProviderFailure> {
        MockLanguageModel::default().extract_product(p)
    }
    fn classify_params(
        &self,
        p: &BTreeMap<String, String>,
    ) -> Result<BTreeMap<String, String>, ProviderFailure> {
        MockLanguageModel::default().classify_params(p)
    }
    fn introduce(&self, _: &str) -> Result<String, ProviderFailure> {
        match self {
            Faulty::Down => Err(ProviderFailure::new("upstream connection refused")),
            Faulty::Slow(d) => {
                std::thread::sleep(*d);
                Ok("# late".into())
            }
        }
    }
}

pub fn state(store: GraphStore, lm: Arc<dyn LanguageModel>, max_limit: usize) -> AppState {
    AppState {
        store: SharedStore::new(store),
        lm,
        timeout: Duration::from_secs(5),
        max_limit,
    }
}

pub fn mock_app(store: GraphStore) -> (Router, SharedStore) {
    let s = state(store, Arc::new(MockLanguageModel::default()), 500);
    let shared = s.store.clone();
    (router(s, None), shared)
}

pub async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Value) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX)
        .await
        .unwrap();
    let body = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes)
            .unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into_owned()))
    };
    (status, body)
}

pub async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

pub async fn post(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    send(
        app,
        Request::post(uri)
            .header("content-type", "application/json")
            .body(Body::from(body.to_string()))
            .unwrap(),
    )
    .await
}

pub fn encode(s: &str) -> String {
    s.bytes()
        .map(|b| match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' => (b as char).to_string(),
            _ => format!("%{b:02X}"),
        })
        .collect()
}

pub fn ids(v: &Value, key: &str) -> Vec<u64> {
    v[key]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["id"].as_u64().unwrap())
        .collect()
}
