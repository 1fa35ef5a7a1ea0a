//! REST surface of the key service.
//!
//! * `POST /keys` `{message_id, key_b64, key_id?, sender_id, recipients[]}` →
//!   `{credentials[], sender_token}`
//! * `GET /keys/{message_id}` with `Authorization: Bearer <token>` → `{key_id, key_b64}`
//! * `GET /keys/{message_id}/audit` with the sender's bearer token → `{fetches[]}`
//!
//! Unknown message ids and bad credentials produce the same status and body.

use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use mailseal_core::MessageKey;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::CorsLayer;

use crate::{Fetch, KeyService, KeyServiceError, RecipientCredential};

#[derive(Debug, Serialize, Deserialize)]
pub struct RegisterRequest {
    pub message_id: String,
    pub key_b64: String,
    #[serde(default)]
    pub key_id: Option<String>,
    pub sender_id: String,
    pub recipients: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RegisterResponse {
    pub credentials: Vec<RecipientCredential>,
    pub sender_token: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KeyResponse {
    pub key_id: String,
    pub key_b64: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AuditResponse {
    pub fetches: Vec<Fetch>,
}

pub fn router(service: KeyService) -> Router {
    Router::new()
        .route("/keys", post(register))
        .route("/keys/{message_id}", get(fetch))
        .route("/keys/{message_id}/audit", get(audit))
        .layer(CorsLayer::permissive())
        .with_state(service)
}

impl IntoResponse for KeyServiceError {
    fn into_response(self) -> Response {
        let (status, message) = match &self {
            KeyServiceError::NotFound | KeyServiceError::AccessDenied => {
                (StatusCode::FORBIDDEN, "not found or access denied".to_owned())
            }
            KeyServiceError::DuplicateMessageId => (StatusCode::CONFLICT, self.to_string()),
            KeyServiceError::EmptyRecipients | KeyServiceError::InvalidRequest(_) => {
                (StatusCode::BAD_REQUEST, self.to_string())
            }
            KeyServiceError::EntropyUnavailable | KeyServiceError::Storage(_) => {
                tracing::error!(error = %self, "key service failure");
                (StatusCode::INTERNAL_SERVER_ERROR, "internal error".to_owned())
            }
        };
        (status, Json(json!({ "error": message }))).into_response()
    }
}

fn bearer(headers: &HeaderMap) -> Result<&str, KeyServiceError> {
    headers
        .get(header::AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "))
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .ok_or(KeyServiceError::AccessDenied)
}

async fn register(
    State(service): State<KeyService>,
    Json(req): Json<RegisterRequest>,
) -> Result<(StatusCode, Json<RegisterResponse>), KeyServiceError> {
    let material = mailseal_core::b64_decode(&req.key_b64)
        .map_err(|_| KeyServiceError::InvalidRequest("key_b64 is not base64url"))?;
    let key_id = req.key_id.unwrap_or_else(|| req.message_id.clone());
    let key = MessageKey::from_parts(key_id, &material)
        .map_err(|_| KeyServiceError::InvalidRequest("key must be 16 bytes"))?;
    let reg = service.register_key(&req.message_id, key, &req.sender_id, &req.recipients)?;
    Ok((
        StatusCode::CREATED,
        Json(RegisterResponse { credentials: reg.credentials, sender_token: reg.sender_token }),
    ))
}

async fn fetch(
    State(service): State<KeyService>,
    Path(message_id): Path<String>,
    headers: HeaderMap,
) -> Result<Json<KeyResponse>, KeyServiceError> {
    let key = service.fetch_key(&message_id, None, bearer(&headers)?)?;
    Ok(Json(KeyResponse {
        key_id: key.key_id().to_owned(),
        key_b64: mailseal_core::b64_encode(key.material()),
    }))
}

async fn audit(
    State(service): State<KeyService>,
    Path(message_id): Path<String>,
    headers: HeaderMap,
) -> Result<Json<AuditResponse>, KeyServiceError> {
    let fetches = service.audit(&message_id, bearer(&headers)?)?;
    Ok(Json(AuditResponse { fetches }))
}
