//! Stateless JSON API. Every request is evaluated independently on the
//! blocking pool; identical bodies give identical responses.

use axum::body::Bytes;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::jobs::{self, JobError, JobResult};

pub fn router() -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/srg", post(|body: Bytes| handle(body, jobs::bound)))
        .route("/api/margin", post(|body: Bytes| handle(body, jobs::margin)))
        .route("/api/sensitivity", post(|body: Bytes| handle(body, jobs::sensitivity)))
        .route("/api/sample", post(|body: Bytes| handle(body, jobs::sample)))
}

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(e: &JobError) -> Response {
    let status = match e {
        JobError::Validation(_) => StatusCode::BAD_REQUEST,
        JobError::Numeric(_) => StatusCode::UNPROCESSABLE_ENTITY,
    };
    json(status, e.to_json())
}

async fn health() -> Response {
    json(StatusCode::OK, jobs::to_json(&jobs::health()))
}

async fn handle<Req, Resp>(body: Bytes, job: fn(&Req) -> JobResult<Resp>) -> Response
where
    Req: DeserializeOwned + Send + 'static,
    Resp: Serialize + Send + 'static,
{
    let run = move || -> JobResult<String> {
        let text = std::str::from_utf8(&body).map_err(|e| JobError::Validation(e.to_string()))?;
        let req: Req = jobs::parse(text)?;
        Ok(jobs::to_json(&job(&req)?))
    };
    match tokio::task::spawn_blocking(run).await {
        Ok(Ok(body)) => json(StatusCode::OK, body),
        Ok(Err(e)) => error(&e),
        Err(e) => error(&JobError::Numeric(format!("evaluation aborted: {e}"))),
    }
}

/// Serves the API on `127.0.0.1:port` until the process is stopped.
pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
