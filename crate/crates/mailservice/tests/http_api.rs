use std::sync::Arc;

use mailseal_core::{encode_envelope_text, encrypt_message, generate_key, Attachment, SecureMessage};
use mailseal_mailservice::html::{envelopes_from_fields, parse_attachment};
use mailseal_mailservice::http::{self, SubmitRequest, SubmitResponse};
use mailseal_mailservice::{MemoryMessageStore, MessageService, NotifyOutcome, OutboxTransport, Recipient, ServiceConfig};
use reqwest::StatusCode;

async fn spawn(outbox: &std::path::Path, static_dir: Option<std::path::PathBuf>) -> String {
    let svc = MessageService::new(
        Arc::new(MemoryMessageStore::new()),
        Arc::new(OutboxTransport::new(outbox).unwrap()),
        ServiceConfig::default(),
    );
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let app = http::router(svc, static_dir);
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    format!("http://{addr}")
}

fn request(id: &str) -> (SubmitRequest, Vec<String>) {
    let msg = SecureMessage {
        subject: "hello".into(),
        body: "world".into(),
        attachments: vec![Attachment { filename: "a.txt".into(), data: b"attached".to_vec() }],
    };
    let enc = encrypt_message(&msg, &generate_key().unwrap(), id, "alice").unwrap();
    let texts: Vec<String> = enc.envelopes().map(encode_envelope_text).collect();
    let req = SubmitRequest {
        message_id: id.into(),
        body_envelope: texts[0].clone(),
        attachment_envelopes: texts[1..].to_vec(),
        recipients: vec![
            Recipient { address: "bob@example.org".into(), credential: Some("t1".into()) },
            Recipient { address: "carol@example.org".into(), credential: Some("t2".into()) },
        ],
        sender_id: "alice".into(),
    };
    (req, texts)
}

#[tokio::test]
async fn submit_render_notify_read() {
    let outbox = tempfile::tempdir().unwrap();
    let base = spawn(outbox.path(), None).await;
    let client = reqwest::Client::new();
    let (req, texts) = request("m1");

    let resp = client.post(format!("{base}/messages")).json(&req).send().await.unwrap();
    assert_eq!(resp.status(), StatusCode::CREATED);
    assert_eq!(resp.json::<SubmitResponse>().await.unwrap().message_id, "m1");

    let resp = client.get(format!("{base}/messages/m1/attachment")).send().await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    assert!(resp.headers()["content-type"].to_str().unwrap().starts_with("text/html"));
    assert!(resp.headers()["content-disposition"].to_str().unwrap().contains("secure-message-m1.html"));
    let html = resp.text().await.unwrap();
    let (action, fields) = parse_attachment(&html).unwrap();
    assert_eq!(action, "http://127.0.0.1:8080/read");
    let (_, envelopes) = envelopes_from_fields(&fields).unwrap();
    let round_tripped: Vec<String> = envelopes.iter().map(encode_envelope_text).collect();
    assert_eq!(round_tripped, texts);

    let outcome: NotifyOutcome = client.post(format!("{base}/messages/m1/notify")).send().await.unwrap().json().await.unwrap();
    assert_eq!(outcome.dispatched, 2);
    assert_eq!(std::fs::read_dir(outbox.path()).unwrap().count(), 2);

    let page = client.post(format!("{base}/read")).form(&fields).send().await.unwrap();
    assert_eq!(page.status(), StatusCode::OK);
    let page = page.text().await.unwrap();
    assert!(page.contains("mailseal-payload"));
    assert!(page.contains(&fields.iter().find(|(k, _)| k == "ciphertext_1").unwrap().1));
}

#[tokio::test]
async fn error_paths() {
    let outbox = tempfile::tempdir().unwrap();
    let base = spawn(outbox.path(), None).await;
    let client = reqwest::Client::new();

    let (mut req, _) = request("m1");
    req.attachment_envelopes[0].truncate(10);
    let resp = client.post(format!("{base}/messages")).json(&req).send().await.unwrap();
    assert_eq!(resp.status(), StatusCode::BAD_REQUEST);
    let body: serde_json::Value = resp.json().await.unwrap();
    assert_eq!(body["error"], "MalformedEnvelope");

    let resp = client.get(format!("{base}/messages/m1/attachment")).send().await.unwrap();
    assert_eq!(resp.status(), StatusCode::NOT_FOUND);

    let (req, _) = request("m2");
    client.post(format!("{base}/messages")).json(&req).send().await.unwrap();
    let dup = client.post(format!("{base}/messages")).json(&req).send().await.unwrap();
    assert_eq!(dup.status(), StatusCode::CONFLICT);

    let bogus = "AAAA%%%secret-looking-bytes";
    let page = client
        .post(format!("{base}/read"))
        .form(&[("message_id", "m2"), ("parts", "1"), ("version_0", "AQ"), ("nonce_0", bogus), ("adata_0", "x"), ("mac_0", "x"), ("ciphertext_0", "x")])
        .send()
        .await
        .unwrap();
    assert_eq!(page.status(), StatusCode::BAD_REQUEST);
    let page = page.text().await.unwrap();
    assert!(page.contains("could not be read"));
    assert!(!page.contains("secret-looking-bytes"));
}

#[tokio::test]
async fn static_bundle_is_served() {
    let outbox = tempfile::tempdir().unwrap();
    let assets = tempfile::tempdir().unwrap();
    std::fs::write(assets.path().join("reader.js"), "export {};").unwrap();
    std::fs::write(assets.path().join("bench.html"), "<html>bench</html>").unwrap();
    let base = spawn(outbox.path(), Some(assets.path().to_path_buf())).await;
    let client = reqwest::Client::new();
    let js = client.get(format!("{base}/static/reader.js")).send().await.unwrap();
    assert_eq!(js.status(), StatusCode::OK);
    let bench = client.get(format!("{base}/bench")).send().await.unwrap().text().await.unwrap();
    assert!(bench.contains("bench"));
}
