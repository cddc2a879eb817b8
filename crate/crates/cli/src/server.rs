//! HTTP API for analysis and fixes, plus the static UI bundle.

use std::path::PathBuf;

use anyhow::{Context, Result};
use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use redos_ia::analysis::{analyze, AnalysisReport, AnalyzeOptions};
use redos_ia::syntax::{MatchMode, Span};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

#[derive(Debug, Clone, Default)]
pub struct AppConfig {
    pub analyze: AnalyzeOptions,
}

#[derive(Debug, Deserialize)]
pub struct AnalyzeRequest {
    pub pattern: String,
    #[serde(default)]
    pub mode: MatchMode,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    /// `bad_request`, `syntax`, `unsupported` or `budget`.
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
}

fn error(status: StatusCode, error: &str, message: String, span: Option<Span>) -> Response {
    (
        status,
        Json(ErrorBody {
            error: error.into(),
            message,
            span,
        }),
    )
        .into_response()
}

pub fn router(config: AppConfig, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/health", get(|| async { "ok" }))
        .route("/api/analyze", post(analyze_handler))
        .route("/api/fix", post(fix_handler))
        .with_state(config);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

async fn run_analysis(
    config: AppConfig,
    body: Bytes,
) -> std::result::Result<AnalysisReport, Response> {
    let req: AnalyzeRequest = serde_json::from_slice(&body).map_err(|e| {
        error(
            StatusCode::BAD_REQUEST,
            "bad_request",
            format!("malformed request: {e}"),
            None,
        )
    })?;
    let opts = AnalyzeOptions {
        fixes: true,
        ..config.analyze
    };
    let report = tokio::task::spawn_blocking(move || analyze(&req.pattern, req.mode, &opts))
        .await
        .map_err(|e| {
            error(
                StatusCode::INTERNAL_SERVER_ERROR,
                "internal",
                e.to_string(),
                None,
            )
        })?;
    if let Some(s) = &report.skip {
        let status = match s.reason.as_str() {
            "syntax" => StatusCode::BAD_REQUEST,
            "unsupported" => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::REQUEST_TIMEOUT,
        };
        return Err(error(status, &s.reason, s.message.clone(), s.span));
    }
    Ok(report)
}

async fn analyze_handler(State(config): State<AppConfig>, body: Bytes) -> Response {
    match run_analysis(config, body).await {
        Ok(report) => Json(report).into_response(),
        Err(resp) => resp,
    }
}

async fn fix_handler(State(config): State<AppConfig>, body: Bytes) -> Response {
    match run_analysis(config, body).await {
        Ok(r) => {
            let message = (!r.has_ia_finding()).then_some("no IA findings; nothing to fix");
            Json(serde_json::json!({
                "pattern": r.pattern,
                "mode": r.mode,
                "verdict": r.verdict,
                "findings": r.findings,
                "fixes": r.fixes,
                "inapplicable": r.inapplicable,
                "message": message,
            }))
            .into_response()
        }
        Err(resp) => resp,
    }
}

pub fn serve_blocking(bind: &str, static_dir: PathBuf) -> Result<u8> {
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(bind)
            .await
            .with_context(|| format!("binding {bind}"))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        let dir = static_dir.is_dir().then_some(static_dir);
        axum::serve(listener, router(AppConfig::default(), dir)).await?;
        Ok(0)
    })
}
