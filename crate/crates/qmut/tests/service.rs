mod common;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};
use tower::ServiceExt;

use common::{fixture, random_graded, random_sequence, TYPES};
use qmut::doc::{self, KindDoc};
use qmut::error::{ApiError, ErrorClass};
use qmut::ops::{self, GenerateAs, GenerateType, SideDoc, DEFAULT_STATE_CAP};
use qmut::service::{router, SCHEMA_HEADER};

const CASES: usize = 50;

async fn call(method: &str, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let res = router().oneshot(req).await.unwrap();
    assert_eq!(res.headers()[SCHEMA_HEADER], doc::SCHEMA);
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

async fn post(uri: &str, body: &Value) -> (StatusCode, Value) {
    call("POST", uri, Some(body.to_string())).await
}

fn expected<T: Serialize>(r: Result<T, ApiError>) -> (StatusCode, Value) {
    match r {
        Ok(v) => (StatusCode::OK, serde_json::to_value(v).unwrap()),
        Err(e) => {
            let status = match e.class {
                ErrorClass::Usage => StatusCode::BAD_REQUEST,
                ErrorClass::Domain => StatusCode::UNPROCESSABLE_ENTITY,
                ErrorClass::Internal => StatusCode::INTERNAL_SERVER_ERROR,
            };
            (status, serde_json::to_value(e).unwrap())
        }
    }
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

#[tokio::test]
async fn mutate_matches_the_library() {
    let mut rng = rng(1);
    for _ in 0..CASES {
        let d = random_graded(&mut rng);
        let vertex = rng.gen_range(0..=d.vertices.len() + 1);
        let graded = rng.gen_bool(0.8);
        let got = post("/api/mutate", &json!({"doc": d, "vertex": vertex, "graded": graded})).await;
        let want = expected(ops::mutate(&d, vertex, graded).map(|(d, mv)| json!({"doc": d, "move": mv})));
        assert_eq!(got, want);
    }
}

#[tokio::test]
async fn exmutate_matches_the_library() {
    let mut rng = rng(2);
    let kinds = [None, Some(KindDoc::T), Some(KindDoc::E), Some(KindDoc::M), Some(KindDoc::X)];
    for _ in 0..CASES {
        let d = random_sequence(&mut rng);
        let position = rng.gen_range(1..d.vertices.len());
        let side = if rng.gen_bool(0.5) { SideDoc::Left } else { SideDoc::Right };
        let kind = *kinds.choose(&mut rng).unwrap();
        let body = json!({"doc": d, "position": position, "side": side, "kind": kind});
        let got = post("/api/exmutate", &body).await;
        let want = expected(ops::exmutate(&d, position, side, kind).map(|(d, mv)| json!({"doc": d, "move": mv})));
        assert_eq!(got, want);
    }
}

#[tokio::test]
async fn ranks_tags_and_verify_match_the_library() {
    let mut rng = rng(3);
    for _ in 0..CASES {
        let d = random_graded(&mut rng);
        let body = json!({"doc": d});
        assert_eq!(post("/api/ranks/solve", &body).await, expected(ops::solve_ranks(&d).map(|d| json!({"doc": d}))));
        assert_eq!(post("/api/tags", &body).await, expected(ops::infer_tags(&d).map(|d| json!({"doc": d}))));
        assert_eq!(post("/api/verify", &body).await, expected(ops::verify(&d)));
    }
}

#[tokio::test]
async fn recover_matches_the_library() {
    let mut rng = rng(4);
    for _ in 0..CASES {
        let d = if rng.gen_bool(0.5) { random_graded(&mut rng) } else { random_sequence(&mut rng) };
        let cap = if rng.gen_bool(0.5) { Some(rng.gen_range(0..20)) } else { None };
        let got = post("/api/recover", &json!({"doc": d, "max_states": cap})).await;
        let want = expected(ops::recover(&d, Some(cap.unwrap_or(DEFAULT_STATE_CAP))));
        assert_eq!(got, want);
    }
}

#[tokio::test]
async fn generate_matches_the_library() {
    let mut rng = rng(5);
    for _ in 0..CASES {
        let p = TYPES.choose(&mut rng).unwrap();
        let weights = p.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let (ty, ty_s) = if rng.gen_bool(0.5) { (GenerateType::Canonical, "canonical") } else { (GenerateType::Squid, "squid") };
        let (as_, as_s) = if rng.gen_bool(0.5) { (GenerateAs::Graded, "graded") } else { (GenerateAs::Sequence, "sequence") };
        let got = call("GET", &format!("/api/generate?type={ty_s}&weights={weights}&as={as_s}"), None).await;
        assert_eq!(got, expected(ops::generate(ty, &weights, as_)));
    }
}

#[tokio::test]
async fn mutating_q1_at_vertex_2_returns_q2() {
    let q1 = doc::parse(&fixture("q1.json")).unwrap();
    let (status, body) = post("/api/mutate", &json!({"doc": q1, "vertex": 2})).await;
    assert_eq!(status, StatusCode::OK);
    let got: doc::Document = serde_json::from_value(body["doc"].clone()).unwrap();
    let q2 = doc::parse(&fixture("q2.json")).unwrap();
    assert!(qmut_core::graded::labeled_equal(&got.to_graded().unwrap(), &q2.to_graded().unwrap()));
    assert_eq!(body["move"]["type"], "graded");
    assert_eq!(body["move"]["at"], 2);
}

#[tokio::test]
async fn squid_generate_has_six_vertices() {
    let (status, body) = call("GET", "/api/generate?type=squid&weights=2,2,2,2", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["vertices"].as_array().unwrap().len(), 6);
}

#[tokio::test]
async fn malformed_input_is_a_bad_request() {
    let (status, body) = call("POST", "/api/recover", Some("{\"doc\": [".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "parse");

    let (status, _) = call("POST", "/api/recover", Some("not json".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let mut d: Value = serde_json::from_str(&fixture("squid_2_3.json")).unwrap();
    d["arrows"][0]["degree"] = 2.into();
    let (status, body) = post("/api/recover", &json!({"doc": d})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["field"], "doc.arrows[0].degree");

    let (status, _) = call("GET", "/api/generate?type=squid&weights=1,2", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, body) = call("GET", "/api/nothing", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "not_found");
}

#[tokio::test]
async fn domain_failures_are_unprocessable() {
    let q2 = doc::parse(&fixture("q2.json")).unwrap();
    let (status, body) = post("/api/verify", &json!({"doc": q2})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["missing_ranks"], json!([2]));

    let mut q1: Value = serde_json::from_str(&fixture("q1.json")).unwrap();
    q1["vertices"][0]["rank"] = 5.into();
    let (status, body) = post("/api/verify", &json!({"doc": q1})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["ok"], false);

    let seq = doc::parse(&fixture("squid_2_3_sequence.json")).unwrap();
    let (status, body) = post("/api/exmutate", &json!({"doc": seq, "position": 1, "side": "left", "kind": "T"})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    assert_eq!(body["code"], "sequence");

    let (status, body) = post("/api/mutate", &json!({"doc": seq, "vertex": 1})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
}
