//! Stateless JSON API over the weight generator, plus optional static files
//! for a browser front end.
//!
//! | route | body / query | success |
//! |---|---|---|
//! | `POST /api/weights` | `{alpha, delta, n, epsilon?}` | generation outcome |
//! | `POST /api/aggregate` | `{alpha, delta, n, criteria, epsilon?}` | `{value, weights, sorted_criteria}` |
//! | `GET /api/frontier` | `points=K`, `2 <= K <= 1001` | `{alphas, delta_max}` |
//!
//! Errors are `{code, message, delta_max?}` with status 400 for malformed
//! or out-of-range requests and 422 for points the generator cannot
//! realize. Responses to the POST routes echo `alpha`, `delta` and `n`.

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::body::Bytes;
use axum::extract::Query;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use owagen::{
    generate_weights, owa_aggregate, parabola_delta_max, CriteriaSet, DecisionPoint,
    GenerationOutcome, OwaError, DEFAULT_EPSILON,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_FRONTIER_POINTS: usize = 201;
pub const MAX_FRONTIER_POINTS: usize = 1001;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsRequest {
    pub alpha: f64,
    pub delta: f64,
    pub n: usize,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AggregateRequest {
    pub alpha: f64,
    pub delta: f64,
    pub n: usize,
    pub criteria: Vec<f64>,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Echo {
    pub alpha: f64,
    pub delta: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightsResponse {
    #[serde(flatten)]
    pub echo: Echo,
    #[serde(flatten)]
    pub outcome: GenerationOutcome,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggregateResponse {
    #[serde(flatten)]
    pub echo: Echo,
    pub value: f64,
    pub weights: Vec<f64>,
    pub sorted_criteria: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrontierResponse {
    pub alphas: Vec<f64>,
    pub delta_max: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_max: Option<f64>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub echo: Option<Echo>,
    #[serde(skip)]
    pub status: u16,
}

impl ApiError {
    fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self {
            code: code.into(),
            message: message.into(),
            delta_max: None,
            echo: None,
            status: 400,
        }
    }

    fn from_core(e: OwaError, echo: Echo) -> Self {
        let (status, code, delta_max) = match &e {
            OwaError::Infeasible { delta_max, .. } => (422, "infeasible", Some(*delta_max)),
            OwaError::DimensionMismatch { .. } => (400, "dimension_mismatch", None),
            OwaError::Domain(_)
            | OwaError::DegenerateDimension(_)
            | OwaError::InvalidWeights(_) => (400, "invalid_request", None),
            _ => (500, "internal", None),
        };
        Self {
            code: code.into(),
            message: e.to_string(),
            delta_max,
            echo: Some(echo),
            status,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

type ApiResult<T> = std::result::Result<Json<T>, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> std::result::Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request("malformed", e.to_string()))
}

fn outcome(
    alpha: f64,
    delta: f64,
    n: usize,
    epsilon: Option<f64>,
) -> owagen::Result<GenerationOutcome> {
    let p = DecisionPoint::new(alpha, delta)?;
    generate_weights(p, n, epsilon.unwrap_or(DEFAULT_EPSILON))
}

async fn weights(body: Bytes) -> ApiResult<WeightsResponse> {
    let req: WeightsRequest = parse_body(&body)?;
    let echo = Echo {
        alpha: req.alpha,
        delta: req.delta,
        n: req.n,
    };
    let out =
        tokio::task::spawn_blocking(move || outcome(req.alpha, req.delta, req.n, req.epsilon))
            .await
            .map_err(|e| ApiError::from_core(OwaError::Numerical(e.to_string()), echo))?
            .map_err(|e| ApiError::from_core(e, echo))?;
    Ok(Json(WeightsResponse { echo, outcome: out }))
}

async fn aggregate(body: Bytes) -> ApiResult<AggregateResponse> {
    let req: AggregateRequest = parse_body(&body)?;
    let echo = Echo {
        alpha: req.alpha,
        delta: req.delta,
        n: req.n,
    };
    if req.criteria.len() != req.n {
        return Err(ApiError::from_core(
            OwaError::DimensionMismatch {
                expected: req.n,
                actual: req.criteria.len(),
            },
            echo,
        ));
    }
    let run = move || -> owagen::Result<AggregateResponse> {
        let out = outcome(req.alpha, req.delta, req.n, req.epsilon)?;
        let criteria = CriteriaSet::new(req.criteria)?;
        Ok(AggregateResponse {
            echo,
            value: owa_aggregate(&out.weights, &criteria)?,
            weights: out.weights.into_inner(),
            sorted_criteria: criteria.sorted(),
        })
    };
    tokio::task::spawn_blocking(run)
        .await
        .map_err(|e| ApiError::from_core(OwaError::Numerical(e.to_string()), echo))?
        .map(Json)
        .map_err(|e| ApiError::from_core(e, echo))
}

#[derive(Deserialize)]
struct FrontierQuery {
    points: Option<String>,
}

/// `k` evenly spaced alphas on `[0, 1]` with `4 alpha (1 - alpha)`.
pub fn frontier_samples(k: usize) -> FrontierResponse {
    let alphas: Vec<f64> = (0..k).map(|i| i as f64 / (k - 1) as f64).collect();
    let delta_max = alphas.iter().map(|&a| parabola_delta_max(a)).collect();
    FrontierResponse { alphas, delta_max }
}

async fn frontier(Query(q): Query<FrontierQuery>) -> ApiResult<FrontierResponse> {
    let k = match q.points {
        None => DEFAULT_FRONTIER_POINTS,
        Some(s) => s.parse::<usize>().map_err(|_| {
            ApiError::bad_request(
                "invalid_request",
                format!("points must be an integer, got {s:?}"),
            )
        })?,
    };
    if !(2..=MAX_FRONTIER_POINTS).contains(&k) {
        return Err(ApiError::bad_request(
            "invalid_request",
            format!("points must lie in [2, {MAX_FRONTIER_POINTS}], got {k}"),
        ));
    }
    Ok(Json(frontier_samples(k)))
}

/// The API under `/api`, and `static_dir` (if any) at `/`.
pub fn router(static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/weights", post(weights))
        .route("/api/aggregate", post(aggregate))
        .route("/api/frontier", get(frontier));
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serves [`router`] on `addr` until the process is stopped.
pub async fn serve(addr: SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(static_dir)).await
}
