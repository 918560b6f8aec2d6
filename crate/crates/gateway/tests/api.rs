use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use http_body_util::BodyExt;
use t4f_core::analytics::{
    heatmap_bins, parallel_wordclouds, rank_terms_tfidf, split_weekday_weekend, HeatmapQuery,
};
use t4f_core::corpus::{ingest_jsonl, FieldMapping, HashtagFilter};
use t4f_core::pipeline::{PreparedCorpus, Resources};
use t4f_core::text::VocabMode;
use t4f_core::topics::{top_words, train_lda, LdaParams, WordCount};
use t4f_gateway::{load_runs_dir, router, to_canonical_json, RunSummary, ServiceState};
use tower::ServiceExt;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn expected(name: &str) -> String {
    std::fs::read_to_string(fixtures().join("expected").join(name)).unwrap()
}

fn state() -> ServiceState {
    let res = Resources::embedded().unwrap();
    let snap = ingest_jsonl(&fixtures().join("tweets.jsonl"), &HashtagFilter::default(), &FieldMapping::default()).unwrap();
    let prep = PreparedCorpus::prepare(&snap, &res);
    let docs: Vec<Vec<String>> = prep.tweets().iter().map(|t| t.tokens.clone()).collect();
    let params = LdaParams {
        iterations: 30,
        seed: 5,
        ..LdaParams::with_topics(2)
    };
    let model = train_lda(&docs, params).unwrap();
    ServiceState::new(snap, &res)
        .with_topic_model(model, 10, 1)
        .with_runs(load_runs_dir(&fixtures().join("runs")).unwrap())
}

async fn get_with(state: Arc<ServiceState>, cors: bool, uri: &str) -> (StatusCode, String, Option<String>) {
    let req = Request::builder()
        .uri(uri)
        .header(header::ORIGIN, "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let resp = router(state, cors).oneshot(req).await.unwrap();
    let status = resp.status();
    let cors_header = resp
        .headers()
        .get(header::ACCESS_CONTROL_ALLOW_ORIGIN)
        .map(|v| v.to_str().unwrap().to_string());
    let body = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(body.to_vec()).unwrap(), cors_header)
}

async fn get(state: &Arc<ServiceState>, uri: &str) -> (StatusCode, String) {
    let (s, b, _) = get_with(state.clone(), false, uri).await;
    (s, b)
}

#[tokio::test]
async fn recorded_fixtures() {
    let s = Arc::new(state());
    let cases = [
        ("/api/stats", "stats.json"),
        ("/api/histogram?phrase=wine&granularity=hour", "histogram_wine_hour.json"),
        ("/api/histogram?phrase=Wine", "histogram_wine_hour.json"),
        ("/api/histogram?phrase=wine&granularity=weekday", "histogram_wine_weekday.json"),
        ("/api/heatmap?phrase=bagel&cell=1.0", "heatmap_bagel_1.json"),
        ("/api/heatmap?phrase=bagel", "heatmap_bagel_1.json"),
        ("/api/heatmap?phrase=bagel&cell=0.1", "heatmap_bagel_0.1.json"),
    ];
    for (uri, file) in cases {
        let (status, body) = get(&s, uri).await;
        assert_eq!(status, StatusCode::OK, "{uri}");
        assert_eq!(body, expected(file), "{uri}");
    }
}

#[tokio::test]
async fn responses_equal_library_output() {
    let s = Arc::new(state());
    let res = Resources::embedded().unwrap();

    let (status, body) = get(&s, "/api/terms/top?vocab=food").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, to_canonical_json(&rank_terms_tfidf(s.corpus(), VocabMode::Food, &res.food)).unwrap());
    let (_, default_vocab) = get(&s, "/api/terms/top").await;
    assert_eq!(default_vocab, body);
    let (_, all) = get(&s, "/api/terms/top?vocab=all_words").await;
    assert_eq!(all, to_canonical_json(&rank_terms_tfidf(s.corpus(), VocabMode::AllWords, &res.food)).unwrap());

    let (weekday, weekend) = split_weekday_weekend(s.corpus());
    let (status, body) = get(&s, "/api/wordclouds?split=weekday_weekend&max_words=5").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, to_canonical_json(&parallel_wordclouds(&weekday, &weekend, 5, 0).unwrap()).unwrap());

    let (status, body) = get(&s, "/api/topics/1/top_words?n=3").await;
    assert_eq!(status, StatusCode::OK);
    let words: Vec<WordCount> = top_words(s.topic_model().unwrap(), 1, 3)
        .unwrap()
        .into_iter()
        .map(|(word, count)| WordCount { word, count })
        .collect();
    assert_eq!(body, to_canonical_json(&words).unwrap());

    let (status, body) = get(&s, "/api/heatmap?topic=0&cell=0.5").await;
    assert_eq!(status, StatusCode::OK);
    let grid = heatmap_bins(s.corpus(), &HeatmapQuery::Topic(0), 0.5, s.topics()).unwrap();
    assert_eq!(body, to_canonical_json(&grid).unwrap());
}

#[tokio::test]
async fn runs_endpoints() {
    let s = Arc::new(state());
    let (status, body) = get(&s, "/api/runs").await;
    assert_eq!(status, StatusCode::OK);
    let list: Vec<RunSummary> = serde_json::from_str(&body).unwrap();
    assert_eq!(list.len(), 1);
    assert_eq!(list[0].id, "demo");
    assert_eq!(list[0].accuracy, 0.8);

    let (status, body) = get(&s, "/api/runs/demo").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, to_canonical_json(&s.runs()["demo"]).unwrap());
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    for key in ["task", "config", "accuracy", "baseline", "p_value", "per_instance", "top_features"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["per_instance"].as_array().unwrap().len(), 5);
}

#[tokio::test]
async fn bad_parameters_are_400() {
    let s = Arc::new(state());
    for uri in [
        "/api/heatmap?phrase=x&cell=2.0",
        "/api/heatmap?phrase=x&cell=abc",
        "/api/heatmap?cell=1.0",
        "/api/heatmap?phrase=x&topic=1",
        "/api/heatmap?topic=one",
        "/api/histogram",
        "/api/histogram?phrase=",
        "/api/histogram?phrase=wine&granularity=minute",
        "/api/histogram?phrase=%21%21",
        "/api/terms/top?vocab=emoji",
        "/api/wordclouds?split=morning_evening",
        "/api/wordclouds?max_words=0",
        "/api/wordclouds?max_words=-3",
        "/api/topics/abc/top_words",
        "/api/topics/0/top_words?n=x",
    ] {
        let (status, body) = get(&s, uri).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri}: {body}");
        let v: serde_json::Value = serde_json::from_str(&body).unwrap();
        assert!(v["error"].is_string(), "{uri}");
    }
}

#[tokio::test]
async fn unknown_resources_are_404() {
    let s = Arc::new(state());
    for uri in [
        "/api/runs/nope",
        "/api/topics/2/top_words",
        "/api/heatmap?topic=7",
        "/api/nothing",
        "/api",
    ] {
        let (status, _) = get(&s, uri).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
    }
    let res = Resources::embedded().unwrap();
    let bare = Arc::new(ServiceState::new(s.snapshot().clone(), &res));
    assert_eq!(get(&bare, "/api/topics/0/top_words").await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&bare, "/api/heatmap?topic=0").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn oversized_responses_are_413() {
    let s = Arc::new(state().with_response_limit(50));
    let (status, body) = get(&s, "/api/stats").await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    assert!(body.contains("error"));
    let (status, _) = get(&s, "/api/heatmap?phrase=bagel&cell=2.0").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn cors_and_placeholder() {
    let s = Arc::new(state());
    let (_, _, with) = get_with(s.clone(), true, "/api/stats").await;
    assert_eq!(with.as_deref(), Some("*"));
    let (_, _, without) = get_with(s.clone(), false, "/api/stats").await;
    assert!(without.is_none());
    let (status, body) = get(&s, "/").await;
    assert_eq!(status, StatusCode::OK);
    assert!(body.contains("/api/"));
}

#[tokio::test]
async fn static_bundle_is_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<h1>ui</h1>").unwrap();
    let s = Arc::new(state().with_static_dir(Some(dir.path().to_path_buf())));
    let (status, body) = get(&s, "/").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, "<h1>ui</h1>");
    assert_eq!(get(&s, "/api/stats").await.0, StatusCode::OK);
}

#[tokio::test]
async fn concurrent_identical_requests_agree() {
    let s = Arc::new(state());
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let s = s.clone();
            tokio::spawn(async move { get(&s, "/api/wordclouds?max_words=10").await })
        })
        .collect();
    let mut bodies = Vec::new();
    for h in handles {
        bodies.push(h.await.unwrap());
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}

#[tokio::test]
async fn graceful_shutdown() {
    let s = Arc::new(state());
    let (tx, rx) = tokio::sync::oneshot::channel::<()>();
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    drop(listener);
    let server = tokio::spawn(t4f_gateway::serve(s, addr, false, async {
        let _ = rx.await;
    }));
    tokio::time::sleep(std::time::Duration::from_millis(200)).await;
    tx.send(()).unwrap();
    let result = tokio::time::timeout(std::time::Duration::from_secs(5), server).await;
    assert!(result.unwrap().unwrap().is_ok());
}
