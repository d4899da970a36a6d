//! Stateless JSON-over-HTTP service.
//!
//! Bodies are parsed by hand so malformed input is reported with the same
//! error objects as the command line: 400 for bad input, 422 for domain
//! errors, 404 for unknown paths and 500 for internal failures. Every
//! response carries the `x-qmut-schema` header.

use axum::body::Bytes;
use axum::extract::Query;
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{middleware, Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::doc::{self, Document, KindDoc, SCHEMA};
use crate::error::{ApiError, ErrorClass};
use crate::ops::{self, GenerateAs, GenerateType, SideDoc, DEFAULT_STATE_CAP};

pub const SCHEMA_HEADER: &str = "x-qmut-schema";

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.class {
            ErrorClass::Usage => StatusCode::BAD_REQUEST,
            ErrorClass::Domain => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorClass::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(self)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ApiError::usage(format!("body is not UTF-8: {e}")))?;
    doc::parse_json(text)
}

/// Schema check of an embedded document, with field paths under `doc`.
fn checked(d: Document) -> Result<Document, ApiError> {
    d.check().map_err(|mut e| {
        e.field = Some(match e.field.take() {
            Some(f) => format!("doc.{f}"),
            None => "doc".into(),
        });
        e
    })?;
    Ok(d)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("responses serialize")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutateRequest {
    pub doc: Document,
    pub vertex: usize,
    #[serde(default = "yes")]
    pub graded: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExmutateRequest {
    pub doc: Document,
    pub position: usize,
    pub side: SideDoc,
    #[serde(default)]
    pub kind: Option<KindDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocRequest {
    pub doc: Document,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverRequest {
    pub doc: Document,
    #[serde(default)]
    pub max_states: Option<usize>,
}

#[derive(Deserialize)]
pub struct GenerateQuery {
    #[serde(rename = "type")]
    pub ty: GenerateType,
    pub weights: String,
    #[serde(default, rename = "as")]
    pub as_: GenerateAs,
}

async fn mutate(bytes: Bytes) -> ApiResult {
    let r: MutateRequest = body(&bytes)?;
    let (d, mv) = ops::mutate(&checked(r.doc)?, r.vertex, r.graded)?;
    Ok(Json(json!({"doc": to_value(&d), "move": to_value(&mv)})))
}

async fn exmutate(bytes: Bytes) -> ApiResult {
    let r: ExmutateRequest = body(&bytes)?;
    let (d, mv) = ops::exmutate(&checked(r.doc)?, r.position, r.side, r.kind)?;
    Ok(Json(json!({"doc": to_value(&d), "move": to_value(&mv)})))
}

async fn solve_ranks(bytes: Bytes) -> ApiResult {
    let r: DocRequest = body(&bytes)?;
    Ok(Json(json!({"doc": to_value(&ops::solve_ranks(&checked(r.doc)?)?)})))
}

async fn tags(bytes: Bytes) -> ApiResult {
    let r: DocRequest = body(&bytes)?;
    Ok(Json(json!({"doc": to_value(&ops::infer_tags(&checked(r.doc)?)?)})))
}

async fn verify(bytes: Bytes) -> ApiResult {
    let r: DocRequest = body(&bytes)?;
    Ok(Json(to_value(&ops::verify(&checked(r.doc)?)?)))
}

async fn recover(bytes: Bytes) -> ApiResult {
    let r: RecoverRequest = body(&bytes)?;
    let d = checked(r.doc)?;
    let cap = r.max_states.unwrap_or(DEFAULT_STATE_CAP);
    let out = tokio::task::spawn_blocking(move || ops::recover(&d, Some(cap)))
        .await
        .map_err(|e| ApiError::internal(format!("recovery task failed: {e}")))??;
    Ok(Json(to_value(&out)))
}

async fn generate(query: Result<Query<GenerateQuery>, axum::extract::rejection::QueryRejection>) -> ApiResult {
    let Query(q) = query.map_err(|e| ApiError::usage(e.body_text()))?;
    Ok(Json(to_value(&ops::generate(q.ty, &q.weights, q.as_)?)))
}

async fn not_found() -> Response {
    let e = ApiError::new(ErrorClass::Usage, "not_found", "no such endpoint");
    (StatusCode::NOT_FOUND, Json(e)).into_response()
}

async fn schema_header(mut res: Response) -> Response {
    res.headers_mut().insert(SCHEMA_HEADER, HeaderValue::from_static(SCHEMA));
    res
}

pub fn router() -> Router {
    Router::new()
        .route("/api/mutate", post(mutate))
        .route("/api/exmutate", post(exmutate))
        .route("/api/ranks/solve", post(solve_ranks))
        .route("/api/tags", post(tags))
        .route("/api/verify", post(verify))
        .route("/api/recover", post(recover))
        .route("/api/generate", get(generate))
        .fallback(not_found)
        .layer(middleware::map_response(schema_header))
}

/// Serve on `addr` until interrupted.
pub async fn serve(addr: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("qmut listening on {}", listener.local_addr()?);
    axum::serve(listener, router())
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
