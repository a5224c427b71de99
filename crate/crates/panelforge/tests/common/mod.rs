#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use axum::body::Body;
use axum::http::{HeaderMap, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use panelforge::assets::load_manifest;
use panelforge::lexicon::default_lexicon;
use panelforge::service::{router, AppState};
use panelforge::store::Store;
use panelforge::Engine;
use tower::ServiceExt;

pub fn assets_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../assets")
}

pub fn engine() -> Engine {
    static ENGINE: OnceLock<Engine> = OnceLock::new();
    ENGINE
        .get_or_init(|| Engine::new(Arc::new(load_manifest(&assets_dir()).unwrap()), Arc::new(default_lexicon())))
        .clone()
}

pub fn app(data: &Path) -> Router {
    let state = Arc::new(AppState { engine: engine(), store: Store::new(data) });
    router(state, None).unwrap()
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| panic!("{e}: {}", self.text()))
    }

    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.body).into_owned()
    }
}

pub async fn call(app: &Router, method: Method, uri: &str, body: impl Into<Vec<u8>>) -> Reply {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.into()))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, headers, body }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    call(app, Method::GET, uri, Vec::new()).await
}

pub async fn post(app: &Router, uri: &str, body: &str) -> Reply {
    call(app, Method::POST, uri, body.as_bytes().to_vec()).await
}

/// Values of `attr` on every `<tag ` element, in document order.
pub fn svg_attrs(svg: &str, tag: &str, attr: &str) -> Vec<f64> {
    let open = format!("<{tag} ");
    let key = format!(" {attr}=\"");
    svg.match_indices(&open)
        .filter_map(|(i, _)| {
            let rest = &svg[i..];
            let end = rest.find('>').unwrap_or(rest.len());
            let el = &rest[..end];
            let at = el.find(&key)? + key.len();
            let len = el[at..].find('"')?;
            el[at..at + len].parse().ok()
        })
        .collect()
}

pub const CHARACTERS: [&str; 6] = ["professor-quark", "hoot", "dr-abacus", "senator-puff", "bolt", "marmalade"];
