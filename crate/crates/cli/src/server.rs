//! HTTP adapter: one core operation per endpoint, every response an
//! [`ApiEnvelope`], session mutations persisted before the reply goes out.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ecorec_core::session::RECOMMENDATION_PROMPT;
use ecorec_core::text_stats::load_contingency_csv;
use ecorec_core::{
    chi_square, lookup_country, summarize, Catalog, CountryRecord, FileStore, Mark, Metric, SessionHub, SessionId,
    SessionStore,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::api::{
    ApiEnvelope, ApiError, ChiSquarePayload, CountryPayload, MarkPayload, PointsPayload, SessionView, StatePayload,
    SummaryPayload, TaskView, TasksPayload,
};
use crate::data;

pub struct App<S> {
    pub dataset: Vec<CountryRecord>,
    pub catalog: Catalog,
    pub hub: SessionHub<S>,
}

impl<S: SessionStore> App<S> {
    pub fn new(dataset: Vec<CountryRecord>, catalog: Catalog, store: S) -> Self {
        App { dataset, catalog, hub: SessionHub::new(store) }
    }
}

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub listen: String,
    pub dataset: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
    pub store: PathBuf,
}

pub struct Reply(StatusCode, ApiEnvelope);

impl IntoResponse for Reply {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

impl From<ApiError> for Reply {
    fn from(e: ApiError) -> Self {
        let status = StatusCode::from_u16(e.http_status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        Reply(status, ApiEnvelope::error(&e))
    }
}

fn ok(envelope: ApiEnvelope) -> Result<Reply, ApiError> {
    Ok(Reply(StatusCode::OK, envelope))
}

fn finish(result: Result<Reply, ApiError>) -> Reply {
    result.unwrap_or_else(Reply::from)
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
}

fn parse_id(raw: &str) -> Result<SessionId, ApiError> {
    raw.parse().map_err(|_| ApiError::unknown_session(raw))
}

/// Runs store-touching work off the async workers.
async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f).await.unwrap_or_else(|e| Err(ApiError::new(500, "Internal", e.to_string())))
}

#[derive(Deserialize)]
struct NameBody {
    name: String,
}

#[derive(Deserialize)]
struct ReplyBody {
    reply: String,
}

#[derive(Deserialize)]
struct MarkBody {
    mark: String,
}

#[derive(Deserialize)]
struct SummaryQuery {
    metric: Option<String>,
}

type Shared<S> = State<Arc<App<S>>>;

async fn create_session<S: SessionStore + 'static>(State(app): Shared<S>) -> Reply {
    finish(
        blocking(move || {
            let s = app.hub.create()?;
            Ok(Reply(StatusCode::CREATED, ApiEnvelope::ok(&SessionView::from(&s))))
        })
        .await,
    )
}

async fn get_session<S: SessionStore + 'static>(State(app): Shared<S>, Path(id): Path<String>) -> Reply {
    finish(
        blocking(move || {
            let s = app.hub.get(&parse_id(&id)?)?;
            ok(ApiEnvelope::ok(&SessionView::from(&s)))
        })
        .await,
    )
}

async fn submit_country<S: SessionStore + 'static>(
    State(app): Shared<S>,
    Path(id): Path<String>,
    body: Bytes,
) -> Reply {
    finish(
        blocking(move || {
            let id = parse_id(&id)?;
            let req: NameBody = parse_body(&body)?;
            let (standing, s) = app.hub.apply(&id, |s| s.submit_country(&app.dataset, &req.name).cloned())?;
            let payload =
                CountryPayload { state: s.state, country: s.country.clone().expect("set by submit_country"), standing };
            ok(ApiEnvelope::ok(&payload).with_message(RECOMMENDATION_PROMPT))
        })
        .await,
    )
}

async fn answer<S: SessionStore + 'static>(State(app): Shared<S>, Path(id): Path<String>, body: Bytes) -> Reply {
    finish(
        blocking(move || {
            let id = parse_id(&id)?;
            let req: ReplyBody = parse_body(&body)?;
            let (message, s) = app.hub.apply(&id, |s| s.answer_recommendations(&req.reply))?;
            ok(ApiEnvelope::ok(&StatePayload { state: s.state }).with_message(message))
        })
        .await,
    )
}

async fn difficulty<S: SessionStore + 'static>(State(app): Shared<S>, Path(id): Path<String>, body: Bytes) -> Reply {
    finish(
        blocking(move || {
            let id = parse_id(&id)?;
            let req: ReplyBody = parse_body(&body)?;
            let (count, s) = app.hub.apply(&id, |s| s.choose_difficulty(&req.reply, &app.catalog))?;
            let payload =
                TasksPayload { state: s.state, difficulty: s.difficulty, count, tasks: TaskView::list(&s.tasks) };
            ok(ApiEnvelope::ok(&payload))
        })
        .await,
    )
}

async fn tasks<S: SessionStore + 'static>(State(app): Shared<S>, Path(id): Path<String>) -> Reply {
    finish(
        blocking(move || {
            let s = app.hub.get(&parse_id(&id)?)?;
            let payload = TasksPayload {
                state: s.state,
                difficulty: s.difficulty,
                count: s.tasks.len(),
                tasks: TaskView::list(&s.tasks),
            };
            ok(ApiEnvelope::ok(&payload))
        })
        .await,
    )
}

async fn mark<S: SessionStore + 'static>(
    State(app): Shared<S>,
    Path((id, index)): Path<(String, String)>,
    body: Bytes,
) -> Reply {
    finish(
        blocking(move || {
            let id = parse_id(&id)?;
            let index: usize =
                index.parse().map_err(|_| ApiError::bad_request(format!("task index `{index}` is not a number")))?;
            let req: MarkBody = parse_body(&body)?;
            let mark: Mark = req.mark.parse().map_err(ApiError::from)?;
            let (outcome, s) = app.hub.apply(&id, |s| s.mark_task(index, mark))?;
            let payload = MarkPayload {
                index,
                awarded: outcome.awarded,
                delta: outcome.delta,
                run_points: s.run_points(),
                total_points: s.total_points(),
            };
            ok(ApiEnvelope::ok(&payload))
        })
        .await,
    )
}

async fn points<S: SessionStore + 'static>(State(app): Shared<S>, Path(id): Path<String>) -> Reply {
    finish(
        blocking(move || {
            let s = app.hub.get(&parse_id(&id)?)?;
            ok(ApiEnvelope::ok(&PointsPayload { run_points: s.run_points(), total_points: s.total_points() }))
        })
        .await,
    )
}

async fn country<S: SessionStore + 'static>(State(app): Shared<S>, Path(name): Path<String>) -> Reply {
    finish(lookup_country(&app.dataset, &name).map_err(ApiError::from).and_then(|r| ok(ApiEnvelope::ok(r))))
}

async fn summary<S: SessionStore + 'static>(State(app): Shared<S>, Query(q): Query<SummaryQuery>) -> Reply {
    let result = (|| {
        let metric: Metric =
            q.metric.as_deref().ok_or_else(|| ApiError::bad_request("missing `metric` query parameter"))?.parse()?;
        let summary = summarize(&app.dataset, metric)?;
        ok(ApiEnvelope::ok(&SummaryPayload { metric, summary }))
    })();
    finish(result)
}

async fn chisq(body: Bytes) -> Reply {
    let result = (|| {
        let table = load_contingency_csv(&body[..])?;
        let result = chi_square(&table);
        ok(ApiEnvelope::ok(&ChiSquarePayload::new(&table, result)))
    })();
    finish(result)
}

async fn not_found() -> Reply {
    ApiError::new(404, "NotFound", "no such endpoint").into()
}

async fn method_not_allowed() -> Reply {
    ApiError::new(405, "MethodNotAllowed", "method not allowed on this endpoint").into()
}

pub fn router<S: SessionStore + 'static>(app: Arc<App<S>>) -> Router {
    Router::new()
        .route("/sessions", post(create_session::<S>))
        .route("/sessions/{id}", get(get_session::<S>))
        .route("/sessions/{id}/country", post(submit_country::<S>))
        .route("/sessions/{id}/answer", post(answer::<S>))
        .route("/sessions/{id}/difficulty", post(difficulty::<S>))
        .route("/sessions/{id}/tasks", get(tasks::<S>))
        .route("/sessions/{id}/tasks/{index}/mark", post(mark::<S>))
        .route("/sessions/{id}/points", get(points::<S>))
        .route("/countries/{name}", get(country::<S>))
        .route("/stats/summary", get(summary::<S>))
        .route("/stats/chisq", post(chisq))
        .fallback(not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .with_state(app)
}

pub fn load_app(config: &ServeConfig) -> Result<App<FileStore>, String> {
    let dataset = data::dataset(config.dataset.as_deref())?;
    let catalog = data::catalog(config.catalog.as_deref())?;
    let store = FileStore::open(&config.store).map_err(|e| e.to_string())?;
    Ok(App::new(dataset, catalog, store))
}

/// Loads everything, binds, prints the bound address and serves until ctrl-c.
pub async fn serve(config: ServeConfig) -> Result<(), String> {
    let app = Arc::new(load_app(&config)?);
    let listener = tokio::net::TcpListener::bind(&config.listen)
        .await
        .map_err(|e| format!("cannot listen on {}: {e}", config.listen))?;
    let addr: SocketAddr = listener.local_addr().map_err(|e| e.to_string())?;
    println!("ecorec listening on http://{addr}");
    axum::serve(listener, router(app))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| e.to_string())
}
