use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use frameshift_core::coding::{Highlight, HighlightKind, Sample, SampleItem, SampleSpec, SessionStore};
use frameshift_core::corpus::{Period, SentenceId};
use frameshift_service::{router, AppState, SessionView};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn item(id: &str, period: Period) -> SampleItem {
    SampleItem {
        sentence_id: id.parse().unwrap(),
        period,
        text: "Experts warn that AI is a risk.".into(),
        highlights: vec![Highlight {
            kind: HighlightKind::Trigger,
            frame: "Warning".into(),
            role: None,
            start: 8,
            end: 12,
        }],
    }
}

fn fixture(n: usize) -> (tempfile::TempDir, Router) {
    let dir = tempfile::tempdir().unwrap();
    let store = SessionStore::open(dir.path()).unwrap();
    let spec = SampleSpec::new("danger", n, 1).unwrap();
    let before = (0..n / 2).map(|i| item(&format!("b{i}:0"), Period::Before)).collect();
    let after = (0..n - n / 2).map(|i| item(&format!("a{i}:0"), Period::After)).collect();
    let sample = Sample {
        sample_id: spec.sample_id(),
        spec,
        population: [n as u64, n as u64],
        before,
        after,
    };
    store.save_sample(&sample).unwrap();
    let app = router(AppState::new(store), None);
    (dir, app)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, v)
}

async fn create(app: &Router, annotator: &str, n: usize) -> String {
    let (s, v) = call(
        app,
        "POST",
        "/api/sessions",
        Some(json!({"sample_id": format!("danger-n{n}-seed1"), "annotator": annotator, "schema": "danger"})),
    )
    .await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    v["session_id"].as_str().unwrap().to_string()
}

async fn label(app: &Router, session: &str, sentence: &str, level1: &str) -> (StatusCode, Value) {
    call(
        app,
        "POST",
        &format!("/api/session/{session}/label"),
        Some(json!({"sentence_id": sentence, "level1": level1})),
    )
    .await
}

#[tokio::test]
async fn empty_directory_lists_no_sessions() {
    let (_d, app) = fixture(4);
    let (s, v) = call(&app, "GET", "/api/sessions", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v, json!([]));
}

#[tokio::test]
async fn label_advances_progress_and_next() {
    let (dir, app) = fixture(4);
    let id = create(&app, "ann1", 4).await;
    assert_eq!(id, "danger-n4-seed1-ann1");

    let (_, v) = call(&app, "GET", &format!("/api/session/{id}/next"), None).await;
    let view: SessionView = serde_json::from_value(v).unwrap();
    assert_eq!((view.progress.labeled, view.progress.total), (0, 4));
    let first = view.next.unwrap();
    assert_eq!(first.sentence_id.to_string(), "b0:0");
    assert_eq!(first.highlights.len(), 1);

    let (s, v) = call(
        &app,
        "POST",
        &format!("/api/session/{id}/label"),
        Some(json!({"sentence_id": "b0:0", "level1": "negative", "level2": "existential"})),
    )
    .await;
    assert_eq!(s, StatusCode::NO_CONTENT);
    assert_eq!(v, Value::Null);

    let (_, v) = call(&app, "GET", &format!("/api/session/{id}/next"), None).await;
    let view: SessionView = serde_json::from_value(v).unwrap();
    assert_eq!(view.progress.labeled, 1);
    assert_eq!(view.next.unwrap().sentence_id.to_string(), "b1:0");

    // the file on disk is the source of truth
    let store = SessionStore::open(dir.path()).unwrap();
    let s = store.load(&id).unwrap();
    assert_eq!(s.labels[&SentenceId::new("b0", 0)].level2.as_deref(), Some("existential"));

    let (_, v) = call(&app, "GET", &format!("/api/session/{id}"), None).await;
    assert_eq!(v["progress"]["labeled"], 1);
    assert_eq!(v["session"]["labels"]["b0:0"]["level1"], "negative");
}

#[tokio::test]
async fn complete_session_has_no_next() {
    let (_d, app) = fixture(2);
    let id = create(&app, "ann1", 2).await;
    for sid in ["b0:0", "a0:0"] {
        let (s, _) = label(&app, &id, sid, "neutral").await;
        assert_eq!(s, StatusCode::NO_CONTENT);
    }
    let (_, v) = call(&app, "GET", &format!("/api/session/{id}/next"), None).await;
    assert_eq!(v["next"], Value::Null);
    assert_eq!(v["progress"], json!({"labeled": 2, "total": 2}));
}

#[tokio::test]
async fn errors_are_json_with_4xx() {
    let (_d, app) = fixture(2);
    let id = create(&app, "ann1", 2).await;
    let lbl = format!("/api/session/{id}/label");
    let sessions = "/api/sessions".to_string();
    let cases = [
        ("GET", "/api/session/nope".to_string(), None, StatusCode::NOT_FOUND),
        ("GET", "/api/schema/nope".to_string(), None, StatusCode::NOT_FOUND),
        ("GET", "/api/nothing".to_string(), None, StatusCode::NOT_FOUND),
        (
            "POST",
            lbl.clone(),
            Some(json!({"sentence_id": "b0:0", "level1": "bogus"})),
            StatusCode::BAD_REQUEST,
        ),
        (
            "POST",
            lbl.clone(),
            Some(json!({"sentence_id": "zz:9", "level1": "neutral"})),
            StatusCode::NOT_FOUND,
        ),
        (
            "POST",
            lbl.clone(),
            Some(json!({"sentence_id": "nocolon", "level1": "neutral"})),
            StatusCode::BAD_REQUEST,
        ),
        ("POST", lbl.clone(), Some(json!({"x": 1})), StatusCode::BAD_REQUEST),
        (
            "POST",
            sessions.clone(),
            Some(json!({"sample_id": "danger-n2-seed1", "annotator": "ann1", "schema": "danger"})),
            StatusCode::CONFLICT,
        ),
        (
            "POST",
            sessions.clone(),
            Some(json!({"sample_id": "missing", "annotator": "x", "schema": "danger"})),
            StatusCode::NOT_FOUND,
        ),
        (
            "POST",
            sessions.clone(),
            Some(json!({"sample_id": "danger-n2-seed1", "annotator": "../etc", "schema": "danger"})),
            StatusCode::BAD_REQUEST,
        ),
        ("GET", format!("/api/agreement?a={id}"), None, StatusCode::BAD_REQUEST),
        ("GET", format!("/api/agreement?a={id}&b={id}"), None, StatusCode::UNPROCESSABLE_ENTITY),
    ];
    for (method, uri, body, want) in cases {
        let (s, v) = call(&app, method, &uri, body).await;
        assert_eq!(s, want, "{method} {uri}: {v}");
        assert!(v["error"].as_str().is_some_and(|e| !e.is_empty()), "{method} {uri}: {v}");
    }
}

#[tokio::test]
async fn schema_and_agreement() {
    let (_d, app) = fixture(4);
    let (s, v) = call(&app, "GET", "/api/schema/danger", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["level1"].as_array().unwrap().len(), 3);

    let a = create(&app, "ann1", 4).await;
    let b = create(&app, "ann2", 4).await;
    let labels = [
        ("b0:0", "negative", "negative"),
        ("b1:0", "neutral", "neutral"),
        ("a0:0", "positive", "negative"),
        ("a1:0", "neutral", "neutral"),
    ];
    for (sid, la, lb) in labels {
        assert_eq!(label(&app, &a, sid, la).await.0, StatusCode::NO_CONTENT);
        assert_eq!(label(&app, &b, sid, lb).await.0, StatusCode::NO_CONTENT);
    }
    let (s, v) = call(&app, "GET", &format!("/api/agreement?a={a}&b={b}"), None).await;
    assert_eq!(s, StatusCode::OK);
    // p_o = 3/4; marginals a (1, 2, 1), b (2, 2, 0): p_e = (2 + 4 + 0) / 16
    assert_eq!(v["total"], 4);
    assert!((v["p_o"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    let pe = 6.0 / 16.0;
    let kappa = (0.75 - pe) / (1.0 - pe);
    assert!((v["kappa"].as_f64().unwrap() - kappa).abs() < 1e-12);

    let (_, v) = call(&app, "GET", "/api/sessions", None).await;
    let ids: Vec<_> = v.as_array().unwrap().iter().map(|s| s["session_id"].as_str().unwrap()).collect();
    assert_eq!(ids, [a.as_str(), b.as_str()]);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_labels_on_one_session_are_not_lost() {
    let n = 40;
    let (dir, app) = fixture(n);
    let id = Arc::new(create(&app, "ann1", n).await);
    let ids: Vec<String> = (0..n / 2)
        .map(|i| format!("b{i}:0"))
        .chain((0..n - n / 2).map(|i| format!("a{i}:0")))
        .collect();
    let mut tasks = Vec::new();
    // two UIs label interleaved halves; both also hit the first sentence
    for (ui, level1) in [(0, "negative"), (1, "positive")] {
        let app = app.clone();
        let id = id.clone();
        let mine: Vec<String> = ids
            .iter()
            .skip(ui)
            .step_by(2)
            .cloned()
            .chain(["b0:0".to_string()])
            .collect();
        tasks.push(tokio::spawn(async move {
            for sid in mine {
                let (s, v) = label(&app, &id, &sid, level1).await;
                assert_eq!(s, StatusCode::NO_CONTENT, "{v}");
            }
        }));
    }
    for t in tasks {
        t.await.unwrap();
    }
    let store = SessionStore::open(dir.path()).unwrap();
    let s = store.load(&id).unwrap();
    assert_eq!(s.labels.len(), n);
    for (i, sid) in ids.iter().enumerate().skip(1) {
        let want = if i % 2 == 0 { "negative" } else { "positive" };
        assert_eq!(s.labels[&sid.parse::<SentenceId>().unwrap()].level1, want, "{sid}");
    }
    assert!(["negative", "positive"].contains(&s.labels[&SentenceId::new("b0", 0)].level1.as_str()));
}

#[tokio::test]
async fn root_serves_placeholder_or_static_bundle() {
    let (_d, app) = fixture(2);
    let resp = app
        .clone()
        .oneshot(Request::builder().uri("/").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.status(), StatusCode::OK);

    let ui = tempfile::tempdir().unwrap();
    std::fs::write(ui.path().join("index.html"), "<p>bundle</p>").unwrap();
    let coding = tempfile::tempdir().unwrap();
    let app = router(
        AppState::new(SessionStore::open(coding.path()).unwrap()),
        Some(ui.path().to_path_buf()),
    );
    let resp = app
        .clone()
        .oneshot(Request::builder().uri("/").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(&bytes[..], b"<p>bundle</p>");
    let (s, v) = call(&app, "GET", "/api/sessions", None).await;
    assert_eq!((s, v), (StatusCode::OK, json!([])));
}

#[tokio::test]
async fn serve_refuses_lan_without_flag_and_shuts_down() {
    use frameshift_service::{bind, run, ServeError, ServeOptions};
    use tokio::io::{AsyncReadExt, AsyncWriteExt};

    let coding = tempfile::tempdir().unwrap();
    let mut opts = ServeOptions {
        addr: "0.0.0.0:0".parse().unwrap(),
        coding_dir: coding.path().to_path_buf(),
        static_dir: None,
        allow_lan: false,
    };
    assert!(matches!(bind(&opts).await, Err(ServeError::NonLoopback(_))));

    opts.addr = "127.0.0.1:0".parse().unwrap();
    let listener = bind(&opts).await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(run(listener, opts.clone(), async {
        let _ = rx.await;
    }));

    // port busy is a startup error
    opts.addr = addr;
    assert!(matches!(bind(&opts).await, Err(ServeError::Bind(..))));

    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    stream
        .write_all(b"GET /api/sessions HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n")
        .await
        .unwrap();
    let mut buf = String::new();
    stream.read_to_string(&mut buf).await.unwrap();
    assert!(buf.starts_with("HTTP/1.1 200"), "{buf}");
    assert!(buf.ends_with("[]"), "{buf}");
    tx.send(()).unwrap();
    server.await.unwrap().unwrap();
}

#[tokio::test]
async fn api_and_terminal_flows_write_equal_sessions() {
    let (dir, app) = fixture(4);
    let api = create(&app, "ann1", 4).await;
    let answers = [("b0:0", "negative", Some("criminal")), ("b1:0", "neutral", Some("balanced")), ("a0:0", "positive", None), ("a1:0", "negative", None)];
    for (sid, l1, l2) in answers {
        let (s, _) = call(
            &app,
            "POST",
            &format!("/api/session/{api}/label"),
            Some(json!({"sentence_id": sid, "level1": l1, "level2": l2})),
        )
        .await;
        assert_eq!(s, StatusCode::NO_CONTENT);
    }

    let store = SessionStore::open(dir.path()).unwrap();
    let term = store.create_session("danger-n4-seed1", "ann1", "danger", Some("terminal")).unwrap();
    // negative=1 (criminal=3), neutral=2 (balanced=1), positive=3, negative with no subgroup
    let script = "1\n3\n2\n1\n3\n\n1\n\n";
    frameshift_core::coding::code_session(&store, &term.session_id, script.as_bytes(), Vec::new()).unwrap();

    let a = store.load(&api).unwrap();
    let t = store.load("terminal").unwrap();
    assert_eq!(a.labels, t.labels);
    assert_eq!((&a.annotator_id, &a.schema, &a.sample_id), (&t.annotator_id, &t.schema, &t.sample_id));
}
