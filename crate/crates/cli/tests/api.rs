mod common;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use srg_cli::server::router;
use tower::ServiceExt;

async fn call(method: &str, uri: &str, body: &str) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn post(uri: &str, body: Value) -> (StatusCode, Value) {
    let (status, text) = call("POST", uri, &body.to_string()).await;
    (status, serde_json::from_str(&text).unwrap())
}

#[tokio::test]
async fn health_reports_version() {
    let (status, text) = call("GET", "/api/health", "").await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["version"], srg_core::VERSION);
}

#[tokio::test]
async fn sector_srg_is_a_disc() {
    let (status, v) = post("/api/srg", json!({"system": common::sector_01()})).await;
    assert_eq!(status, StatusCode::OK);
    let p = &v["primitives"][0];
    assert_eq!(p["type"], "disc");
    assert_eq!(p["center"], json!([0.5, 0.0]));
    assert_eq!(p["radius"], 0.5);
    assert_eq!(v["schema_version"], 1);
}

#[tokio::test]
async fn unit_controller_is_not_separated() {
    let body = json!({"controller": common::c0(), "plant": common::lag_saturation()});
    let (status, v) = post("/api/margin", body).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["separated"], false);
    assert_eq!(v["kind"], "robustness");
}

#[tokio::test]
async fn derivative_controller_margin() {
    let body = json!({"controller": common::c2(), "plant": common::lag_saturation()});
    let (status, v) = post("/api/margin", body).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["separated"], true);
    let rm = v["r_m"].as_f64().unwrap();
    assert!((rm - 0.875).abs() < 0.875 * 0.02, "{rm}");
}

#[tokio::test]
async fn sensitivity_returns_margin_and_region() {
    let body = json!({
        "plant": {"type": "lti", "num": [1.0], "den": [1.0, 1.0]},
        "controller": {"type": "lti", "num": [1.0], "den": [1.0]}
    });
    let (status, v) = post("/api/sensitivity", body).await;
    assert_eq!(status, StatusCode::OK);
    let sm = v["margin"]["s_m"].as_f64().unwrap();
    assert!((sm - 1.0).abs() < 1e-3);
    assert!(v["region"]["primitives"].as_array().is_some_and(|p| !p.is_empty()));
}

#[tokio::test]
async fn sample_is_deterministic() {
    let body = json!({
        "system": common::sector_01(),
        "class": {"horizon": 2.0, "dt": 0.01},
        "n_pairs": 20,
        "seed": 5
    });
    let (s1, a) = call("POST", "/api/sample", &body.to_string()).await;
    let (s2, b) = call("POST", "/api/sample", &body.to_string()).await;
    assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 5);
}

#[tokio::test]
async fn malformed_body_is_400() {
    let (status, text) = call("POST", "/api/srg", "{not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["error"]["kind"], "validation");

    let (status, _) = post("/api/srg", json!({"system": {"type": "bogus"}})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post("/api/srg", json!({"system": common::sector_01(), "extra": 1})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post("/api/srg", json!({"system": common::sector_01(), "resolution": -1.0})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn geometry_failure_is_422() {
    let body = json!({"system": {"type": "lti", "num": [1.0], "den": [1.0, 0.0, 1.0]}});
    let (status, v) = post("/api/srg", body).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["kind"], "numeric");
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn concurrent_requests_agree() {
    let body = json!({"controller": common::c2(), "plant": common::lag_saturation()}).to_string();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let body = body.clone();
            tokio::spawn(async move { call("POST", "/api/margin", &body).await })
        })
        .collect();
    let mut results = Vec::new();
    for h in handles {
        results.push(h.await.unwrap());
    }
    assert_eq!(results[0].0, StatusCode::OK);
    assert!(results.windows(2).all(|w| w[0] == w[1]));
}
