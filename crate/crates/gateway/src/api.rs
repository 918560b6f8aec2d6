use std::collections::HashMap;
use std::future::Future;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde::{Deserialize, Serialize};
use t4f_core::analytics::{
    heatmap_bins, parallel_wordclouds, rank_terms_tfidf, split_weekday_weekend, temporal_histogram, Granularity,
    HeatmapQuery,
};
use t4f_core::text::VocabMode;
use t4f_core::topics::{top_words, WordCount};
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use crate::json::to_canonical_json;
use crate::state::ServiceState;

/// Largest response body the service will send.
pub const MAX_RESPONSE_BYTES: usize = 10 * 1024 * 1024;

const DEFAULT_MAX_WORDS: usize = 50;
const DEFAULT_TOP_WORDS: usize = 10;
const PLACEHOLDER: &str = "<!doctype html><title>t4f</title><p>The t4f API is running. No UI bundle is being served; \
start with <code>--static DIR</code> to serve one. Endpoints live under <code>/api/</code>.</p>";

type Shared = Arc<ServiceState>;
type Params = Query<HashMap<String, String>>;

#[derive(Debug)]
struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(msg: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: msg.into(),
        }
    }

    fn not_found(msg: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            message: msg.into(),
        }
    }
}

impl From<t4f_core::Error> for ApiError {
    fn from(e: t4f_core::Error) -> Self {
        use t4f_core::Error as E;
        let status = match e {
            E::InvalidArgument(_) => StatusCode::BAD_REQUEST,
            E::TopicOutOfRange { .. } | E::EmptyGroup => StatusCode::NOT_FOUND,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError {
            status,
            message: e.to_string(),
        }
    }
}

fn json_body(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = to_canonical_json(&serde_json::json!({ "error": self.message }))
            .unwrap_or_else(|_| r#"{"error":"internal error"}"#.into());
        json_body(self.status, body)
    }
}

type ApiResult = Result<Response, ApiError>;

fn respond<T: Serialize>(state: &ServiceState, value: &T) -> ApiResult {
    let body = to_canonical_json(value).map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        message: e.to_string(),
    })?;
    if body.len() > state.response_limit() {
        return Err(ApiError {
            status: StatusCode::PAYLOAD_TOO_LARGE,
            message: format!("response of {} bytes exceeds the {} byte cap", body.len(), state.response_limit()),
        });
    }
    Ok(json_body(StatusCode::OK, body))
}

fn param<'a>(q: &'a HashMap<String, String>, key: &str) -> Option<&'a str> {
    q.get(key).map(String::as_str)
}

fn parse_param<T: std::str::FromStr>(q: &HashMap<String, String>, key: &str, default: T) -> Result<T, ApiError> {
    match param(q, key) {
        None => Ok(default),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| ApiError::bad_request(format!("invalid {key}: {v:?}"))),
    }
}

fn required<'a>(q: &'a HashMap<String, String>, key: &str) -> Result<&'a str, ApiError> {
    param(q, key)
        .filter(|v| !v.trim().is_empty())
        .ok_or_else(|| ApiError::bad_request(format!("missing parameter {key}")))
}

async fn stats(State(s): State<Shared>) -> ApiResult {
    respond(&s, s.stats())
}

async fn terms_top(State(s): State<Shared>, Query(q): Params) -> ApiResult {
    let mode: VocabMode = match param(&q, "vocab") {
        None => VocabMode::Food,
        Some(v) => v.parse().map_err(|e: t4f_core::Error| ApiError::bad_request(e.to_string()))?,
    };
    respond(&s, &rank_terms_tfidf(s.corpus(), mode, s.food()))
}

async fn histogram(State(s): State<Shared>, Query(q): Params) -> ApiResult {
    let phrase = required(&q, "phrase")?;
    let granularity: Granularity = match param(&q, "granularity") {
        None => Granularity::Hour,
        Some(g) => g.parse().map_err(|e: t4f_core::Error| ApiError::bad_request(e.to_string()))?,
    };
    respond(&s, &temporal_histogram(s.corpus(), phrase, granularity)?)
}

async fn heatmap(State(s): State<Shared>, Query(q): Params) -> ApiResult {
    let query = match (param(&q, "phrase"), param(&q, "topic")) {
        (Some(p), None) => HeatmapQuery::Phrase(p.to_string()),
        (None, Some(t)) => HeatmapQuery::Topic(
            t.trim()
                .parse()
                .map_err(|_| ApiError::bad_request(format!("invalid topic: {t:?}")))?,
        ),
        _ => return Err(ApiError::bad_request("give exactly one of phrase or topic")),
    };
    let cell: f64 = parse_param(&q, "cell", 1.0)?;
    if let HeatmapQuery::Topic(_) = query {
        if s.topics().is_none() {
            return Err(ApiError::not_found("no topic model loaded"));
        }
    }
    respond(&s, &heatmap_bins(s.corpus(), &query, cell, s.topics())?)
}

async fn wordclouds(State(s): State<Shared>, Query(q): Params) -> ApiResult {
    let split = param(&q, "split").unwrap_or("weekday_weekend");
    if split != "weekday_weekend" {
        return Err(ApiError::bad_request(format!("unknown split {split:?}")));
    }
    let max_words: usize = parse_param(&q, "max_words", DEFAULT_MAX_WORDS)?;
    let seed: u64 = parse_param(&q, "seed", 0)?;
    let (weekday, weekend) = split_weekday_weekend(s.corpus());
    respond(&s, &parallel_wordclouds(&weekday, &weekend, max_words, seed)?)
}

async fn topic_words(State(s): State<Shared>, Path(id): Path<String>, Query(q): Params) -> ApiResult {
    let topic: usize = id
        .parse()
        .map_err(|_| ApiError::bad_request(format!("invalid topic id {id:?}")))?;
    let n: usize = parse_param(&q, "n", DEFAULT_TOP_WORDS)?;
    let model = s.topic_model().ok_or_else(|| ApiError::not_found("no topic model loaded"))?;
    let words: Vec<WordCount> = top_words(model, topic, n)?
        .into_iter()
        .map(|(word, count)| WordCount { word, count })
        .collect();
    respond(&s, &words)
}

/// One entry of `/api/runs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub id: String,
    pub task: String,
    pub accuracy: f64,
    pub baseline: f64,
    pub instances: usize,
    pub p_value: Option<f64>,
}

async fn runs(State(s): State<Shared>) -> ApiResult {
    let list: Vec<RunSummary> = s
        .runs()
        .iter()
        .map(|(id, r)| RunSummary {
            id: id.clone(),
            task: r.task.clone(),
            accuracy: r.accuracy,
            baseline: r.baseline,
            instances: r.instances,
            p_value: r.p_value,
        })
        .collect();
    respond(&s, &list)
}

async fn run(State(s): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let r = s.runs().get(&id).ok_or_else(|| ApiError::not_found(format!("no run {id:?}")))?;
    respond(&s, r)
}

async fn api_not_found() -> ApiError {
    ApiError::not_found("unknown endpoint")
}

async fn placeholder() -> Html<&'static str> {
    Html(PLACEHOLDER)
}

/// Builds the router. With `cors`, any origin may read the API.
pub fn router(state: Arc<ServiceState>, cors: bool) -> Router {
    let api = Router::new()
        .route("/api/stats", get(stats))
        .route("/api/terms/top", get(terms_top))
        .route("/api/histogram", get(histogram))
        .route("/api/heatmap", get(heatmap))
        .route("/api/wordclouds", get(wordclouds))
        .route("/api/topics/{id}/top_words", get(topic_words))
        .route("/api/runs", get(runs))
        .route("/api/runs/{id}", get(run))
        .route("/api", get(api_not_found))
        .route("/api/{*rest}", get(api_not_found));
    let app = match state.static_dir() {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(placeholder)),
    };
    let app = app.with_state(state);
    if cors {
        app.layer(CorsLayer::permissive())
    } else {
        app
    }
}

/// Serves until `shutdown` resolves, then lets in-flight requests finish.
pub async fn serve(
    state: Arc<ServiceState>,
    addr: SocketAddr,
    cors: bool,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state, cors))
        .with_graceful_shutdown(shutdown)
        .await
}
