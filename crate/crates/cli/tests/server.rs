use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use redos_ia_cli::server::{router, AppConfig};
use tower::ServiceExt;

async fn call(method: &str, uri: &str, body: &str) -> (StatusCode, Vec<u8>) {
    let app = router(AppConfig::default(), None);
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, bytes.to_vec())
}

async fn json(uri: &str, body: &str) -> (StatusCode, serde_json::Value) {
    let (status, bytes) = call("POST", uri, body).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

#[tokio::test]
async fn health() {
    let (status, body) = call("GET", "/api/health", "").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"ok");
}

#[tokio::test]
async fn analyze_returns_report_with_fixes() {
    let (status, v) = json("/api/analyze", r#"{"pattern":"(a|b|ab)*","mode":"full"}"#).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["verdict"]["degree"], "eda");
    assert_eq!(v["findings"][0]["kind"], "Star2");
    assert!(!v["fixes"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn mode_defaults_to_full() {
    let (status, v) = json("/api/analyze", r#"{"pattern":"a+"}"#).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["mode"], "full");
    assert_eq!(v["verdict"]["degree"], "unambiguous");
}

#[tokio::test]
async fn fix_endpoint() {
    let (status, v) = json("/api/fix", r#"{"pattern":"b+c"}"#).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["message"], "no IA findings; nothing to fix");
    let (_, v) = json("/api/fix", r#"{"pattern":"\\w*0\\d*"}"#).await;
    let regexes: Vec<&str> = v["fixes"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|f| f["regex"].as_str())
        .collect();
    assert!(regexes.contains(&r"\w*:0\d*"), "{regexes:?}");
}

#[tokio::test]
async fn error_statuses() {
    let (status, v) = json("/api/analyze", r#"{"pattern":"ab(c"}"#).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"], "syntax");
    assert_eq!(v["span"]["start"], 2);

    let (status, v) = json("/api/analyze", r#"{"pattern":"(?<x>a)\\k<x>"}"#).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "unsupported");

    let (status, _) = json("/api/analyze", r#"{"pattern":"(a{50}){50}"}"#).await;
    assert_eq!(status, StatusCode::REQUEST_TIMEOUT);

    let (status, v) = json("/api/analyze", "{not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"], "bad_request");
}
