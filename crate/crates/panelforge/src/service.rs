//! JSON/HTTP front end. Every render goes through [`Engine`], so responses
//! match the command line byte for byte.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use panelforge_core::markov::{markov_sequence, ExpressionChain};
use panelforge_core::sentiment::ExpressionTag;
use serde::Deserialize;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::assets::Category;
use crate::error::{parse_json, Error};
use crate::pipeline::Engine;
use crate::spec::{PageSpecJson, PanelSpec};
use crate::store::Store;

pub const MAX_SEQUENCE_LEN: usize = 10_000;
const SVG: &str = "image/svg+xml";
const PNG: &str = "image/png";

pub struct AppState {
    pub engine: Engine,
    pub store: Store,
}

pub struct ApiError(pub Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(e)
    }
}

pub fn status_of(e: &Error) -> StatusCode {
    match e {
        Error::Syntax(_) => StatusCode::BAD_REQUEST,
        Error::Invalid(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::NotFound { .. } => StatusCode::NOT_FOUND,
        Error::Library(_) | Error::Io { .. } | Error::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (status_of(&self.0), Json(self.0.to_json())).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: Arc<AppState>, cors_origin: Option<&str>) -> Result<Router, Error> {
    let cors = match cors_origin {
        None => CorsLayer::permissive(),
        Some(o) => {
            let origin = HeaderValue::from_str(o).map_err(|_| Error::invalid("cors_origin", "not a valid origin"))?;
            CorsLayer::new()
                .allow_origin(AllowOrigin::exact(origin))
                .allow_methods(tower_http::cors::Any)
                .allow_headers(tower_http::cors::Any)
        }
    };
    Ok(Router::new()
        .route("/api/characters", get(list_characters))
        .route("/api/characters/{id}", get(get_character))
        .route("/api/characters/{id}/{file}", get(character_image))
        .route("/api/panels", post(create_panel))
        .route("/api/panels/preview", post(preview_panel))
        .route("/api/panels/layout", post(panel_layout))
        .route("/api/panels/{file}", get(get_panel))
        .route("/api/pages", post(create_page))
        .route("/api/pages/{file}", get(get_page))
        .route("/api/expressions/suggest", post(suggest))
        .route("/api/expressions/sequence", post(sequence))
        .fallback(|| async { ApiError(Error::NotFound { kind: "route", id: String::new() }) })
        .layer(cors)
        .with_state(state))
}

pub async fn serve(addr: SocketAddr, app: Router) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn body(content_type: &'static str, bytes: impl Into<axum::body::Body>) -> Response {
    ([(header::CONTENT_TYPE, content_type)], bytes.into()).into_response()
}

enum Format {
    Svg,
    Png,
}

/// `"{id}.svg"` or `"{id}.png"`.
fn split_file<'a>(kind: &'static str, file: &'a str) -> ApiResult<(&'a str, Format)> {
    if let Some(id) = file.strip_suffix(".svg") {
        Ok((id, Format::Svg))
    } else if let Some(id) = file.strip_suffix(".png") {
        Ok((id, Format::Png))
    } else {
        Err(Error::NotFound { kind, id: file.to_string() }.into())
    }
}

fn scale_param(q: &HashMap<String, String>) -> ApiResult<f64> {
    match q.get("scale") {
        None => Ok(1.0),
        Some(s) => s.parse::<f64>().map_err(|_| Error::invalid("scale", "not a number").into()),
    }
}

async fn list_characters(
    State(st): State<Arc<AppState>>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let category = match q.get("category") {
        None => None,
        Some(c) => Some(c.parse::<Category>().map_err(|e| Error::invalid("category", e.to_string()))?),
    };
    Ok(Json(st.engine.library().list_characters(category)).into_response())
}

async fn get_character(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    let c = st.engine.library().get(&id).ok_or(Error::NotFound { kind: "character", id })?;
    Ok(Json(c.summary()).into_response())
}

async fn character_image(
    State(st): State<Arc<AppState>>,
    Path((id, file)): Path<(String, String)>,
) -> ApiResult<Response> {
    let not_found = || Error::NotFound { kind: "expression", id: format!("{id}/{file}") };
    let tag: ExpressionTag = file.strip_suffix(".png").and_then(|t| t.parse().ok()).ok_or_else(not_found)?;
    let lib = st.engine.library();
    if lib.get(&id).is_none() {
        return Err(Error::NotFound { kind: "character", id }.into());
    }
    let r = lib.resolve(&id, tag).map_err(|e| Error::Library(e.to_string()))?;
    let mut resp = body(PNG, r.image.png.as_ref().clone());
    let headers = resp.headers_mut();
    headers.insert("x-expression", HeaderValue::from_static(r.tag.as_str()));
    headers.insert("x-expression-fallback", HeaderValue::from_static(if r.fallback { "true" } else { "false" }));
    Ok(resp)
}

async fn preview_panel(State(st): State<Arc<AppState>>, bytes: Bytes) -> ApiResult<Response> {
    let spec = PanelSpec::parse(&bytes)?;
    Ok(body(SVG, st.engine.panel_svg(&spec)?))
}

async fn panel_layout(State(st): State<Arc<AppState>>, bytes: Bytes) -> ApiResult<Response> {
    let spec = PanelSpec::parse(&bytes)?;
    Ok(Json(st.engine.panel_layout(&spec)?).into_response())
}

async fn create_panel(State(st): State<Arc<AppState>>, bytes: Bytes) -> ApiResult<Response> {
    let spec = PanelSpec::parse(&bytes)?;
    st.engine.render_panel(&spec)?;
    let id = st.store.save_panel(&spec)?;
    let links = serde_json::json!({
        "id": id,
        "svg": format!("/api/panels/{id}.svg"),
        "png": format!("/api/panels/{id}.png"),
    });
    Ok((StatusCode::CREATED, Json(links)).into_response())
}

async fn get_panel(
    State(st): State<Arc<AppState>>,
    Path(file): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let (id, format) = split_file("panel", &file)?;
    let spec = st.store.load_panel(id)?;
    Ok(match format {
        Format::Svg => body(SVG, st.engine.panel_svg(&spec)?),
        Format::Png => body(PNG, st.engine.panel_png(&spec, scale_param(&q)?)?),
    })
}

async fn create_page(State(st): State<Arc<AppState>>, bytes: Bytes) -> ApiResult<Response> {
    let page = PageSpecJson::parse(&bytes)?;
    st.engine.render_page(&page, |id| st.store.load_panel(id))?;
    let id = st.store.save_page(&page)?;
    let links = serde_json::json!({
        "id": id,
        "svg": format!("/api/pages/{id}.svg"),
        "png": format!("/api/pages/{id}.png"),
    });
    Ok((StatusCode::CREATED, Json(links)).into_response())
}

async fn get_page(
    State(st): State<Arc<AppState>>,
    Path(file): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let (id, format) = split_file("page", &file)?;
    let page = st.store.load_page(id)?;
    let doc = st.engine.render_page(&page, |pid| st.store.load_panel(pid))?;
    Ok(match format {
        Format::Svg => body(SVG, panelforge_core::svg::to_svg(&doc)),
        Format::Png => body(PNG, crate::pipeline::png_of(&doc, scale_param(&q)?)?),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuggestRequest {
    text: String,
}

async fn suggest(State(st): State<Arc<AppState>>, bytes: Bytes) -> ApiResult<Response> {
    let req: SuggestRequest = parse_json(&bytes)?;
    Ok(Json(st.engine.suggest(&req.text)).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceRequest {
    #[serde(default)]
    chain: Option<ExpressionChain>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    start: Option<ExpressionTag>,
    length: usize,
}

async fn sequence(bytes: Bytes) -> ApiResult<Response> {
    let req: SequenceRequest = parse_json(&bytes)?;
    if req.length > MAX_SEQUENCE_LEN {
        return Err(Error::invalid("length", format!("at most {MAX_SEQUENCE_LEN}")).into());
    }
    let mut chain = req.chain.unwrap_or_else(|| ExpressionChain::uniform(0));
    if let Some(seed) = req.seed {
        chain.seed = seed;
    }
    let seq = markov_sequence(&chain, req.start.unwrap_or(ExpressionTag::Neutral), req.length)
        .map_err(|e| Error::invalid("chain", e.to_string()))?;
    Ok(Json(serde_json::json!({ "sequence": seq })).into_response())
}
