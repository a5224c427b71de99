mod common;

use axum::http::StatusCode;
use common::{app, get, post, svg_attrs};
use sha2::{Digest, Sha256};

const TWO: &str = r#"{"characters":[{"id":"professor-quark"},{"id":"hoot"}],"u":0}"#;

fn count_json(dir: &std::path::Path) -> usize {
    std::fs::read_dir(dir).map(|d| d.filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")).count()).unwrap_or(0)
}

#[tokio::test]
async fn character_listing_and_detail() {
    let data = tempfile::tempdir().unwrap();
    let app = app(data.path());
    let all = get(&app, "/api/characters").await;
    assert_eq!(all.status, StatusCode::OK);
    assert_eq!(all.json().as_array().unwrap().len(), 6);

    let animals = get(&app, "/api/characters?category=animal").await.json();
    let ids: Vec<_> = animals.as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap().to_string()).collect();
    assert_eq!(ids.len(), 2);
    assert!(ids.contains(&"hoot".to_string()) && ids.contains(&"marmalade".to_string()));

    let bad = get(&app, "/api/characters?category=plants").await;
    assert_eq!(bad.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(bad.json()["error"]["fields"][0]["field"], "category");

    let one = get(&app, "/api/characters/hoot").await.json();
    assert_eq!(one["creator"], "panelforge contributors");
    assert_eq!(one["wikipedia_url"], "https://en.wikipedia.org/wiki/Owl");
    assert_eq!(one["expressions"].as_array().unwrap().len(), 5);

    assert_eq!(get(&app, "/api/characters/nobody").await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn expression_images_fall_back_to_neutral() {
    let data = tempfile::tempdir().unwrap();
    let app = app(data.path());
    let happy = get(&app, "/api/characters/hoot/happy.png").await;
    assert_eq!(happy.status, StatusCode::OK);
    assert_eq!(happy.headers["content-type"], "image/png");
    assert_eq!(happy.headers["x-expression-fallback"], "false");
    let angry = get(&app, "/api/characters/bolt/angry.png").await;
    assert_eq!(angry.headers["x-expression"], "neutral");
    assert_eq!(angry.headers["x-expression-fallback"], "true");
    assert_eq!(angry.body, get(&app, "/api/characters/bolt/neutral.png").await.body);
    assert_eq!(get(&app, "/api/characters/bolt/grumpy.png").await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn preview_at_apex_has_equal_heights() {
    let data = tempfile::tempdir().unwrap();
    let app = app(data.path());
    let r = post(&app, "/api/panels/preview", TWO).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.headers["content-type"], "image/svg+xml");
    let heights = svg_attrs(&r.text(), "image", "height");
    assert_eq!(heights.len(), 2);
    assert_eq!(heights[0], heights[1]);
}

#[tokio::test]
async fn request_errors() {
    let data = tempfile::tempdir().unwrap();
    let app = app(data.path());
    assert_eq!(post(&app, "/api/panels/preview", "{not json").await.status, StatusCode::BAD_REQUEST);

    let r = post(&app, "/api/panels/preview", r#"{"characters":[{"id":"hoot"}],"u":3,"a":0.5}"#).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    let fields: Vec<_> = r.json()["error"]["fields"].as_array().unwrap().iter().map(|f| f["field"].clone()).collect();
    assert_eq!(fields, ["u", "a"]);

    let r = post(&app, "/api/panels/preview", r#"{"characters":[{"id":"nobody"}]}"#).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(r.json()["error"]["fields"][0]["field"], "characters[0].id");

    let r = post(&app, "/api/panels/preview", r#"{"characters":[{"id":"hoot","expression":"smug"}]}"#).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(r.json()["error"]["fields"][0]["field"], "characters[0].expression");

    let r = post(&app, "/api/panels", r#"{"characters":[{"id":"hoot","expression":"auto"}]}"#).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(count_json(&data.path().join("panels")), 0);

    assert_eq!(get(&app, "/api/nothing-here").await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn saved_panels_render_like_previews() {
    let data = tempfile::tempdir().unwrap();
    let app = app(data.path());
    let spec = r#"{"characters":[{"id":"dr-abacus","expression":"auto"},{"id":"marmalade","flip":true}],
                   "u":-0.4,"balloons":[{"anchor":0,"text":"I love a good proof"}]}"#;
    let created = post(&app, "/api/panels", spec).await;
    assert_eq!(created.status, StatusCode::CREATED);
    let id = created.json()["id"].as_str().unwrap().to_string();
    assert!(data.path().join("panels").join(format!("{id}.json")).is_file());

    let svg = get(&app, &format!("/api/panels/{id}.svg")).await;
    assert_eq!(svg.status, StatusCode::OK);
    assert_eq!(svg.body, post(&app, "/api/panels/preview", spec).await.body);

    let a = get(&app, &format!("/api/panels/{id}.png?scale=1.5")).await;
    let b = get(&app, &format!("/api/panels/{id}.png?scale=1.5")).await;
    assert_eq!(a.status, StatusCode::OK);
    assert_eq!(&a.body[1..4], b"PNG");
    assert_eq!(Sha256::digest(&a.body), Sha256::digest(&b.body));

    assert_eq!(get(&app, &format!("/api/panels/{id}.png?scale=0")).await.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(get(&app, &format!("/api/panels/{id}.gif")).await.status, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/panels/01ARZ3NDEKTSV4RRFFQ69G5FAV.svg").await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn pages_from_stored_panels() {
    let data = tempfile::tempdir().unwrap();
    let app = app(data.path());
    let mut ids = Vec::new();
    for (a, b) in [("hoot", "bolt"), ("professor-quark", "senator-puff"), ("marmalade", "hoot")] {
        let body = format!(r#"{{"characters":[{{"id":"{a}"}},{{"id":"{b}"}}],"u":0.5}}"#);
        ids.push(post(&app, "/api/panels", &body).await.json()["id"].as_str().unwrap().to_string());
    }
    let page = format!(
        r#"{{"panels":[{{"panel_id":"{}"}},{{"panel_id":"{}"}},{{"aspect":1.0}},{{"panel_id":"{}"}}],"title_aspect":6}}"#,
        ids[0], ids[1], ids[2]
    );
    let created = post(&app, "/api/pages", &page).await;
    assert_eq!(created.status, StatusCode::CREATED, "{}", created.text());
    let pid = created.json()["id"].as_str().unwrap().to_string();
    let svg = get(&app, &format!("/api/pages/{pid}.svg")).await;
    assert_eq!(svg.status, StatusCode::OK);
    assert_eq!(svg_attrs(&svg.text(), "svg", "width")[0], 612.0);
    assert_eq!(svg.body, get(&app, &format!("/api/pages/{pid}.svg")).await.body);
    let png = get(&app, &format!("/api/pages/{pid}.png")).await;
    assert_eq!(png.status, StatusCode::OK);

    let missing = post(&app, "/api/pages", r#"{"panels":[{"panel_id":"01ARZ3NDEKTSV4RRFFQ69G5FAV"}]}"#).await;
    assert_eq!(missing.status, StatusCode::NOT_FOUND);
    assert_eq!(count_json(&data.path().join("pages")), 1);
}

#[tokio::test]
async fn expression_endpoints() {
    let data = tempfile::tempdir().unwrap();
    let app = app(data.path());
    let r = post(&app, "/api/expressions/suggest", r#"{"text":"What a happy day"}"#).await;
    assert_eq!(r.json(), serde_json::json!({"valence": 0.8, "tag": "happy"}));
    assert_eq!(post(&app, "/api/expressions/suggest", r#"{"txt":"x"}"#).await.status, StatusCode::UNPROCESSABLE_ENTITY);

    let seq = post(&app, "/api/expressions/sequence", r#"{"seed":42,"length":16}"#).await.json();
    let expected = [
        "angry", "angry", "neutral", "happy", "surprised", "happy", "happy", "neutral", "surprised", "angry", "sad",
        "surprised", "surprised", "neutral", "neutral", "neutral",
    ];
    assert_eq!(seq["sequence"], serde_json::json!(expected));
    let bad = post(&app, "/api/expressions/sequence", r#"{"length":2,"chain":{"states":["happy"],"matrix":[[0.5]],"seed":1}}"#).await;
    assert_eq!(bad.status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn layout_endpoint_reports_placements() {
    let data = tempfile::tempdir().unwrap();
    let app = app(data.path());
    let v = post(&app, "/api/panels/layout", TWO).await.json();
    let p = v["placements"].as_array().unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(p[0]["h"], p[1]["h"]);
    assert_eq!(v["frame"]["h"], p[0]["h"]);
    let right = p[1]["x"].as_f64().unwrap() + p[1]["w"].as_f64().unwrap();
    assert!((right - v["frame"]["w"].as_f64().unwrap()).abs() < 1e-9);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_saves_land_whole() {
    let data = tempfile::tempdir().unwrap();
    let app = app(data.path());
    let mut tasks = Vec::new();
    for k in 0..24 {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            let u = (k as f64 / 12.0) - 1.0;
            let body = format!(r#"{{"characters":[{{"id":"hoot"}},{{"id":"bolt"}}],"u":{u}}}"#);
            post(&app, "/api/panels", &body).await.json()["id"].as_str().unwrap().to_string()
        }));
    }
    let mut ids = Vec::new();
    for t in tasks {
        ids.push(t.await.unwrap());
    }
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), 24);
    for id in &ids {
        let text = std::fs::read_to_string(data.path().join("panels").join(format!("{id}.json"))).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["id"], id.as_str());
        assert_eq!(v["kind"], "panel");
    }
    assert_eq!(count_json(&data.path().join("panels")), 24);
}
