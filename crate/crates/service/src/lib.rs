//! Local HTTP front for coding sessions.
//!
//! All state lives in the session store on disk; handlers load, mutate and
//! write through [`SessionStore`], so anything done here is visible to the
//! terminal flow and the report stage and vice versa.

use std::future::Future;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use frameshift_core::coding::{
    agreement, confusion, subgroup_breakdown, AgreementReport, Breakdown, CodingSchema, CodingSession,
    SampleItem, SessionStore,
};
use frameshift_core::corpus::SentenceId;
use frameshift_core::Error;
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

const PLACEHOLDER: &str = "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>frameshift</title></head>\n<body><h1>frameshift coding service</h1>\n<p>No UI bundle is configured. The JSON API is under <code>/api</code>.</p></body></html>\n";

#[derive(Debug, Clone)]
pub struct ServeOptions {
    pub addr: SocketAddr,
    /// Directory holding `samples/`, `sessions/` and optional `schemas/`.
    pub coding_dir: PathBuf,
    pub static_dir: Option<PathBuf>,
    /// Permit a non-loopback bind address.
    pub allow_lan: bool,
}

#[derive(Clone)]
pub struct AppState {
    store: Arc<SessionStore>,
}

impl AppState {
    pub fn new(store: SessionStore) -> Self {
        Self { store: Arc::new(store) }
    }

    pub fn store(&self) -> &SessionStore {
        &self.store
    }
}

/// An error body `{"error": "..."}` with its status.
#[derive(Debug)]
pub struct ApiError(StatusCode, String);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Unknown { .. } => StatusCode::NOT_FOUND,
            Error::Exists { .. } => StatusCode::CONFLICT,
            Error::NoJointLabels => StatusCode::UNPROCESSABLE_ENTITY,
            Error::Io { .. } | Error::Csv(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(serde_json::json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

fn body<T>(payload: std::result::Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload
        .map(|Json(v)| v)
        .map_err(|r| ApiError(StatusCode::BAD_REQUEST, r.body_text()))
}

/// Runs blocking store work off the async workers.
async fn blocking<T, F>(state: &AppState, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&SessionStore) -> frameshift_core::Result<T> + Send + 'static,
{
    let store = state.store.clone();
    tokio::task::spawn_blocking(move || f(&store))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(ApiError::from)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub labeled: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub session_id: String,
    pub annotator_id: String,
    pub schema: String,
    pub sample_id: String,
    pub progress: Progress,
}

/// What the UI needs to show the next item. `next` is absent exactly when
/// the session is complete.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub session_id: String,
    pub annotator_id: String,
    pub schema: String,
    pub progress: Progress,
    pub next: Option<SampleItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionDetail {
    pub session: CodingSession,
    pub progress: Progress,
    pub breakdown: Breakdown,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CreateSession {
    pub sample_id: String,
    pub annotator: String,
    pub schema: String,
    #[serde(default)]
    pub session_id: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LabelRequest {
    pub sentence_id: String,
    pub level1: String,
    #[serde(default)]
    pub level2: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AgreementQuery {
    pub a: String,
    pub b: String,
}

fn summary(store: &SessionStore, s: CodingSession) -> frameshift_core::Result<SessionSummary> {
    let sample = store.load_sample(&s.sample_id)?;
    let (labeled, total) = s.progress(&sample);
    Ok(SessionSummary {
        session_id: s.session_id,
        annotator_id: s.annotator_id,
        schema: s.schema,
        sample_id: s.sample_id,
        progress: Progress { labeled, total },
    })
}

async fn list_sessions(State(st): State<AppState>) -> ApiResult<Json<Vec<SessionSummary>>> {
    let out = blocking(&st, |store| {
        store.list()?.into_iter().map(|s| summary(store, s)).collect()
    })
    .await?;
    Ok(Json(out))
}

async fn create_session(
    State(st): State<AppState>,
    payload: std::result::Result<Json<CreateSession>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<SessionSummary>)> {
    let req = body(payload)?;
    let out = blocking(&st, move |store| {
        let s = store.create_session(&req.sample_id, &req.annotator, &req.schema, req.session_id.as_deref())?;
        summary(store, s)
    })
    .await?;
    Ok((StatusCode::CREATED, Json(out)))
}

async fn get_session(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionDetail>> {
    let out = blocking(&st, move |store| {
        let session = store.load(&id)?;
        let sample = store.load_sample(&session.sample_id)?;
        let schema = store.schema(&session.schema)?;
        let (labeled, total) = session.progress(&sample);
        let breakdown = subgroup_breakdown(&session, &sample, &schema);
        Ok(SessionDetail {
            session,
            progress: Progress { labeled, total },
            breakdown,
        })
    })
    .await?;
    Ok(Json(out))
}

async fn next_item(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let out = blocking(&st, move |store| {
        let session = store.load(&id)?;
        let sample = store.load_sample(&session.sample_id)?;
        let (labeled, total) = session.progress(&sample);
        let next = session.next_unlabeled(&sample).cloned();
        Ok(SessionView {
            session_id: session.session_id,
            annotator_id: session.annotator_id,
            schema: session.schema,
            progress: Progress { labeled, total },
            next,
        })
    })
    .await?;
    Ok(Json(out))
}

async fn post_label(
    State(st): State<AppState>,
    Path(id): Path<String>,
    payload: std::result::Result<Json<LabelRequest>, JsonRejection>,
) -> ApiResult<StatusCode> {
    let req = body(payload)?;
    let sid: SentenceId = req
        .sentence_id
        .parse()
        .map_err(|e: Error| ApiError(StatusCode::BAD_REQUEST, e.to_string()))?;
    blocking(&st, move |store| {
        store.label(&id, &sid, &req.level1, req.level2.as_deref())?;
        Ok(())
    })
    .await?;
    Ok(StatusCode::NO_CONTENT)
}

async fn get_agreement(
    State(st): State<AppState>,
    query: std::result::Result<Query<AgreementQuery>, QueryRejection>,
) -> ApiResult<Json<AgreementReport>> {
    let Query(q) = query.map_err(|r| ApiError(StatusCode::BAD_REQUEST, r.body_text()))?;
    let out = blocking(&st, move |store| {
        let a = store.load(&q.a)?;
        let b = store.load(&q.b)?;
        let schema = store.schema(&a.schema)?;
        agreement(&confusion(&a, &b, &schema)?)
    })
    .await?;
    Ok(Json(out))
}

async fn get_schema(State(st): State<AppState>, Path(name): Path<String>) -> ApiResult<Json<CodingSchema>> {
    let out = blocking(&st, move |store| store.schema(&name)).await?;
    Ok(Json(out))
}

async fn api_not_found() -> ApiError {
    ApiError(StatusCode::NOT_FOUND, "no such endpoint".into())
}

async fn placeholder() -> Html<&'static str> {
    Html(PLACEHOLDER)
}

pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", get(list_sessions).post(create_session))
        .route("/session/{id}", get(get_session))
        .route("/session/{id}/next", get(next_item))
        .route("/session/{id}/label", post(post_label))
        .route("/agreement", get(get_agreement))
        .route("/schema/{name}", get(get_schema))
        .fallback(api_not_found);
    let app = Router::new().nest("/api", api);
    let app = match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir).append_index_html_on_directories(true)),
        None => app.route("/", get(placeholder)),
    };
    app.with_state(state)
}

#[derive(Debug)]
pub enum ServeError {
    NonLoopback(IpAddr),
    Store(Error),
    Bind(SocketAddr, std::io::Error),
    Server(std::io::Error),
}

impl std::fmt::Display for ServeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ServeError::NonLoopback(ip) => {
                write!(f, "refusing to bind {ip}: not a loopback address (pass --allow-lan to override)")
            }
            ServeError::Store(e) => write!(f, "{e}"),
            ServeError::Bind(addr, e) => write!(f, "cannot bind {addr}: {e}"),
            ServeError::Server(e) => write!(f, "server error: {e}"),
        }
    }
}

impl std::error::Error for ServeError {}

/// Binds and serves until `shutdown` resolves, then drains in-flight
/// requests. Label writes are synchronous and atomic, so nothing is left
/// to flush afterwards.
pub async fn serve(opts: ServeOptions, shutdown: impl Future<Output = ()> + Send + 'static) -> Result<(), ServeError> {
    let listener = bind(&opts).await?;
    run(listener, opts, shutdown).await
}

/// Binds the listener, checking the loopback rule.
pub async fn bind(opts: &ServeOptions) -> Result<tokio::net::TcpListener, ServeError> {
    let ip = opts.addr.ip();
    if !ip.is_loopback() {
        if !opts.allow_lan {
            return Err(ServeError::NonLoopback(ip));
        }
        log::warn!("binding {ip}: the service has no authentication");
    }
    tokio::net::TcpListener::bind(opts.addr)
        .await
        .map_err(|e| ServeError::Bind(opts.addr, e))
}

/// Serves on an already bound listener.
pub async fn run(
    listener: tokio::net::TcpListener,
    opts: ServeOptions,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServeError> {
    let store = SessionStore::open(&opts.coding_dir).map_err(ServeError::Store)?;
    let app = router(AppState::new(store), opts.static_dir.clone());
    if let Ok(addr) = listener.local_addr() {
        log::info!("serving {} on http://{addr}", opts.coding_dir.display());
    }
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown)
        .await
        .map_err(ServeError::Server)
}
