use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use mailseal_core::EncryptedMessage;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageStatus {
    Stored,
    Notified,
}

/// A notification target. The credential is the recipient's key-service
/// bearer token, forwarded into the reading link of the notification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipient {
    pub address: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub credential: Option<String>,
}

/// One stored message: envelopes and routing data, never keys or plaintext.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageRecord {
    pub message_id: String,
    pub enc: EncryptedMessage,
    pub sender_id: String,
    pub recipients: Vec<Recipient>,
    pub created_at: DateTime<Utc>,
    pub status: MessageStatus,
    /// Addresses whose notification has been handed to the transport.
    #[serde(default)]
    pub notified: BTreeSet<String>,
}

impl MessageRecord {
    pub fn pending_recipients(&self) -> impl Iterator<Item = &Recipient> {
        self.recipients.iter().filter(|r| !self.notified.contains(&r.address))
    }
}
