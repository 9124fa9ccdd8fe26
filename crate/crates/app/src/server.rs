//! The stateless JSON service. Every route is `POST /api/<endpoint>` and runs
//! the same [`dispatch`](crate::api::dispatch) as the CLI, on the blocking pool.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::extract::Path;
use axum::http::{header, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::post;
use axum::{Json, Router};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tower_http::cors::{Any, CorsLayer};

use crate::api::dispatch;
use crate::error::{ApiError, ErrorCode};

pub const DEFAULT_PORT: u16 = 8080;

pub fn router() -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::POST, Method::OPTIONS])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/{*endpoint}", post(handle).fallback(wrong_method))
        .fallback(unknown)
        .layer(cors)
}

fn error_response(e: &ApiError) -> Response {
    let status = StatusCode::from_u16(e.code.http_status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, Json(e.envelope())).into_response()
}

async fn handle(Path(endpoint): Path<String>, body: Bytes) -> Response {
    let body: Value = if body.iter().all(u8::is_ascii_whitespace) {
        Value::Null
    } else {
        match serde_json::from_slice(&body) {
            Ok(v) => v,
            Err(e) => return error_response(&ApiError::malformed(format!("invalid JSON: {e}"))),
        }
    };
    match tokio::task::spawn_blocking(move || dispatch(&endpoint, body)).await {
        Ok(Ok(result)) => Json(json!({ "ok": true, "result": result })).into_response(),
        Ok(Err(e)) => error_response(&e),
        Err(_) => error_response(&ApiError::new(ErrorCode::InternalError, "request handler failed")),
    }
}

async fn wrong_method() -> Response {
    error_response(&ApiError::new(ErrorCode::MethodNotAllowed, "use POST"))
}

async fn unknown() -> Response {
    error_response(&ApiError::new(ErrorCode::UnknownEndpoint, "endpoints live under /api/"))
}

/// Binds `addr` and serves until the process stops.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    serve_on(listener).await
}

pub async fn serve_on(listener: TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router()).await
}
