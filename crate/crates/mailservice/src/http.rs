//! REST surface of the message service.
//!
//! * `POST /messages` JSON → `{message_id}`
//! * `GET /messages/{id}/attachment` → `text/html` download
//! * `POST /messages/{id}/notify` → `{dispatched, failures[]}`
//! * `POST /read` form-encoded attachment fields → reading page
//! * `GET /read` → landing page for notification links
//! * `/static/*` client bundle and kernel module, `/bench` benchmark page

use std::path::PathBuf;

use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Form, Json, Router};
use mailseal_core::{decode_envelope_text, EncryptedMessage};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::{ServeDir, ServeFile};

use crate::reading::render_error_page;
use crate::{MessageService, MessageServiceError, NotifyOutcome, Recipient};

/// Upper bound for request bodies: a handful of 20 MiB attachments in base64.
pub const MAX_BODY_BYTES: usize = 256 * 1024 * 1024;

#[derive(Debug, Serialize, Deserialize)]
pub struct SubmitRequest {
    pub message_id: String,
    pub body_envelope: String,
    #[serde(default)]
    pub attachment_envelopes: Vec<String>,
    pub recipients: Vec<Recipient>,
    pub sender_id: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SubmitResponse {
    pub message_id: String,
}

pub fn router(service: MessageService, static_dir: Option<PathBuf>) -> Router {
    let mut app = Router::new()
        .route("/messages", post(submit))
        .route("/messages/{id}/attachment", get(attachment))
        .route("/messages/{id}/notify", post(notify))
        .route("/read", post(read).get(read_landing));
    if let Some(dir) = static_dir {
        app = app
            .route_service("/bench", ServeFile::new(dir.join("bench.html")))
            .nest_service("/static", ServeDir::new(dir));
    }
    app.layer(DefaultBodyLimit::max(MAX_BODY_BYTES)).with_state(service)
}

impl IntoResponse for MessageServiceError {
    fn into_response(self) -> Response {
        let (status, kind) = match &self {
            MessageServiceError::Malformed(e) => (StatusCode::BAD_REQUEST, e.kind()),
            MessageServiceError::DuplicateMessageId => (StatusCode::CONFLICT, "DuplicateMessageId"),
            MessageServiceError::EmptyRecipients => (StatusCode::BAD_REQUEST, "EmptyRecipients"),
            MessageServiceError::InvalidMessageId => (StatusCode::BAD_REQUEST, "InvalidMessageId"),
            MessageServiceError::NotFound => (StatusCode::NOT_FOUND, "NotFound"),
            MessageServiceError::Storage(_) => {
                tracing::error!(error = %self, "message service failure");
                (StatusCode::INTERNAL_SERVER_ERROR, "Internal")
            }
        };
        (status, Json(json!({ "error": kind }))).into_response()
    }
}

async fn submit(
    State(service): State<MessageService>,
    Json(req): Json<SubmitRequest>,
) -> Result<(StatusCode, Json<SubmitResponse>), MessageServiceError> {
    let enc = EncryptedMessage {
        message_id: req.message_id,
        body_envelope: decode_envelope_text(&req.body_envelope)?,
        attachment_envelopes: req
            .attachment_envelopes
            .iter()
            .map(|e| decode_envelope_text(e))
            .collect::<Result<_, _>>()?,
    };
    let message_id = service.submit_message(enc, req.recipients, &req.sender_id)?;
    Ok((StatusCode::CREATED, Json(SubmitResponse { message_id })))
}

async fn attachment(
    State(service): State<MessageService>,
    Path(id): Path<String>,
) -> Result<Response, MessageServiceError> {
    let att = service.render_attachment(&id)?;
    let disposition = format!("attachment; filename=\"{}\"", att.filename());
    Ok((
        [(header::CONTENT_TYPE, "text/html; charset=utf-8".to_owned()), (header::CONTENT_DISPOSITION, disposition)],
        att.html,
    )
        .into_response())
}

async fn notify(
    State(service): State<MessageService>,
    Path(id): Path<String>,
) -> Result<Json<NotifyOutcome>, MessageServiceError> {
    Ok(Json(service.notify_recipients(&id)?))
}

async fn read(State(service): State<MessageService>, Form(fields): Form<Vec<(String, String)>>) -> Response {
    match service.reading_page(&fields) {
        Ok(page) => Html(page).into_response(),
        Err(_) => (StatusCode::BAD_REQUEST, Html(render_error_page())).into_response(),
    }
}

async fn read_landing(State(service): State<MessageService>) -> Html<String> {
    let prefix = &service.config().static_prefix;
    Html(format!(
        "<!DOCTYPE html>
<html lang=\"en\">
<head>
  <meta charset=\"utf-8\">
  <title>Secure message</title>
  <script type=\"module\" src=\"{prefix}/reader.js\"></script>
</head>
<body>
  <main id=\"reader\"><p>Your access code is saved in this browser. Now open the attached file from the notification email.</p></main>
</body>
</html>
"
    ))
}
