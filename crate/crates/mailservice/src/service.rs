use std::sync::Arc;

use chrono::Utc;
use mailseal_core::{EncryptedMessage, KernelError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::html::{self, envelopes_from_fields};
use crate::reading::{render_reading_page, ReadingPayload};
use crate::store::{MessageStore, StoreError};
use crate::transport::{MailTransport, TransportError};
use crate::{HtmlAttachment, MessageRecord, MessageStatus, NotificationEmail, Recipient};

#[derive(Debug, Error)]
pub enum MessageServiceError {
    #[error(transparent)]
    Malformed(#[from] KernelError),
    #[error("message id already stored")]
    DuplicateMessageId,
    #[error("at least one recipient is required")]
    EmptyRecipients,
    #[error("message id must be 1-128 characters of [A-Za-z0-9._-]")]
    InvalidMessageId,
    #[error("no such message")]
    NotFound,
    #[error("storage failure: {0}")]
    Storage(String),
}

impl From<StoreError> for MessageServiceError {
    fn from(err: StoreError) -> Self {
        match err {
            StoreError::Duplicate => MessageServiceError::DuplicateMessageId,
            StoreError::Missing => MessageServiceError::NotFound,
            other => MessageServiceError::Storage(other.to_string()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Externally reachable base URL of this service, without trailing slash.
    pub public_url: String,
    /// Base URL the reading page uses to fetch keys.
    pub key_service_url: String,
    pub from_address: String,
    /// URL prefix under which the client bundle is served.
    pub static_prefix: String,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            public_url: "http://127.0.0.1:8080".into(),
            key_service_url: "http://127.0.0.1:8081".into(),
            from_address: "noreply@mailseal.invalid".into(),
            static_prefix: "/static".into(),
        }
    }
}

impl ServiceConfig {
    pub fn reading_url(&self) -> String {
        format!("{}/read", self.public_url.trim_end_matches('/'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotifyOutcome {
    pub dispatched: usize,
    pub failures: Vec<TransportError>,
}

#[derive(Clone)]
pub struct MessageService {
    store: Arc<dyn MessageStore>,
    transport: Arc<dyn MailTransport>,
    config: Arc<ServiceConfig>,
}

impl MessageService {
    pub fn new(store: Arc<dyn MessageStore>, transport: Arc<dyn MailTransport>, config: ServiceConfig) -> Self {
        Self { store, transport, config: Arc::new(config) }
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn store(&self) -> &Arc<dyn MessageStore> {
        &self.store
    }

    pub fn submit_message(
        &self,
        enc: EncryptedMessage,
        recipients: Vec<Recipient>,
        sender_id: &str,
    ) -> Result<String, MessageServiceError> {
        if !crate::is_valid_message_id(&enc.message_id) {
            return Err(MessageServiceError::InvalidMessageId);
        }
        let mut unique: Vec<Recipient> = Vec::with_capacity(recipients.len());
        for r in recipients {
            if !r.address.is_empty() && !unique.iter().any(|u| u.address == r.address) {
                unique.push(r);
            }
        }
        if unique.is_empty() {
            return Err(MessageServiceError::EmptyRecipients);
        }
        enc.validate_structure()?;

        let message_id = enc.message_id.clone();
        let parts = enc.envelopes().count();
        let bytes = enc.ciphertext_bytes();
        self.store.insert(MessageRecord {
            message_id: message_id.clone(),
            enc,
            sender_id: sender_id.to_owned(),
            recipients: unique,
            created_at: Utc::now(),
            status: MessageStatus::Stored,
            notified: Default::default(),
        })?;
        tracing::info!(message_id = %message_id, parts, ciphertext_bytes = bytes, "message stored");
        Ok(message_id)
    }

    pub fn render_attachment(&self, message_id: &str) -> Result<HtmlAttachment, MessageServiceError> {
        let record = self.store.get(message_id).ok_or(MessageServiceError::NotFound)?;
        Ok(html::render_attachment(&record, &self.config.reading_url()))
    }

    /// Sends one notification per recipient not yet notified. Concurrent
    /// callers never send the same notification twice.
    pub fn notify_recipients(&self, message_id: &str) -> Result<NotifyOutcome, MessageServiceError> {
        let record = self.store.get(message_id).ok_or(MessageServiceError::NotFound)?;
        if record.status == MessageStatus::Notified {
            return Ok(NotifyOutcome { dispatched: 0, failures: Vec::new() });
        }
        let claimed = self.store.claim_pending(message_id)?;
        let attachment = html::render_attachment(&record, &self.config.reading_url());

        let mut delivered = Vec::with_capacity(claimed.len());
        let mut failures = Vec::new();
        for recipient in &claimed {
            let email = NotificationEmail::new(
                &self.config.from_address,
                &recipient.address,
                &record.sender_id,
                &self.config.reading_url(),
                recipient.credential.as_deref(),
                attachment.clone(),
            );
            match self.transport.deliver(&email) {
                Ok(()) => delivered.push(recipient.address.clone()),
                Err(err) => {
                    tracing::warn!(message_id, recipient = %recipient.address, "notification failed");
                    failures.push(err);
                }
            }
        }
        let record = self.store.settle(message_id, &claimed, &delivered)?;
        tracing::info!(message_id, dispatched = delivered.len(), failed = failures.len(), status = ?record.status, "notifications sent");
        Ok(NotifyOutcome { dispatched: delivered.len(), failures })
    }

    /// Validates posted attachment fields and returns the reading page.
    pub fn reading_page(&self, fields: &[(String, String)]) -> Result<String, MessageServiceError> {
        let (message_id, envelopes) = envelopes_from_fields(fields)?;
        let parts = envelopes.len();
        let mut envelopes = envelopes.into_iter();
        let enc = EncryptedMessage {
            message_id: message_id.clone(),
            body_envelope: envelopes.next().expect("at least one part"),
            attachment_envelopes: envelopes.collect(),
        };
        enc.validate_structure()?;
        let payload = ReadingPayload::from_fields(&message_id, parts, fields);
        Ok(render_reading_page(&payload, &self.config.static_prefix, &self.config.key_service_url))
    }
}
