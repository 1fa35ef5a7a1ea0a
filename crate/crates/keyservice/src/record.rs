use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use mailseal_core::MessageKey;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fetch {
    pub recipient_id: String,
    pub at: DateTime<Utc>,
}

/// A bearer credential as handed to one recipient of one message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipientCredential {
    pub recipient_id: String,
    pub token: String,
}

/// Everything the service knows about one message. Tokens are stored only as
/// SHA-256 digests.
#[derive(Debug, Clone)]
pub struct KeyRecord {
    pub message_id: String,
    pub key: MessageKey,
    pub sender_id: String,
    pub sender_token_digest: [u8; 32],
    /// recipient id -> token digest
    pub recipients: BTreeMap<String, [u8; 32]>,
    pub created_at: DateTime<Utc>,
    pub fetches: Vec<Fetch>,
}
