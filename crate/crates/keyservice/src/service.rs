use std::collections::BTreeMap;
use std::sync::Arc;

use chrono::Utc;
use mailseal_core::MessageKey;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::store::{KeyStore, StoreError};
use crate::{Fetch, KeyRecord, RecipientCredential};

#[derive(Debug, Error)]
pub enum KeyServiceError {
    #[error("message id already registered")]
    DuplicateMessageId,
    #[error("at least one recipient is required")]
    EmptyRecipients,
    #[error("not found")]
    NotFound,
    #[error("access denied")]
    AccessDenied,
    #[error("invalid request: {0}")]
    InvalidRequest(&'static str),
    #[error("secure random source unavailable")]
    EntropyUnavailable,
    #[error("storage failure: {0}")]
    Storage(String),
}

impl From<StoreError> for KeyServiceError {
    fn from(err: StoreError) -> Self {
        match err {
            StoreError::Duplicate => KeyServiceError::DuplicateMessageId,
            StoreError::Missing => KeyServiceError::NotFound,
            other => KeyServiceError::Storage(other.to_string()),
        }
    }
}

/// Result of a registration: one credential per recipient plus the sender's
/// audit credential.
#[derive(Debug, Clone)]
pub struct Registration {
    pub credentials: Vec<RecipientCredential>,
    pub sender_token: String,
}

#[derive(Clone)]
pub struct KeyService {
    store: Arc<dyn KeyStore>,
}

fn mint_token() -> Result<String, KeyServiceError> {
    let mut raw = [0u8; 32];
    getrandom::getrandom(&mut raw).map_err(|_| KeyServiceError::EntropyUnavailable)?;
    Ok(mailseal_core::b64_encode(&raw))
}

fn digest(token: &str) -> [u8; 32] {
    Sha256::digest(token.as_bytes()).into()
}

impl KeyService {
    pub fn new(store: Arc<dyn KeyStore>) -> Self {
        Self { store }
    }

    pub fn store(&self) -> &Arc<dyn KeyStore> {
        &self.store
    }

    pub fn register_key(
        &self,
        message_id: &str,
        key: MessageKey,
        sender_id: &str,
        recipients: &[String],
    ) -> Result<Registration, KeyServiceError> {
        if message_id.is_empty() {
            return Err(KeyServiceError::InvalidRequest("empty message id"));
        }
        let mut unique: Vec<&String> = recipients.iter().collect();
        unique.sort();
        unique.dedup();
        if unique.is_empty() {
            return Err(KeyServiceError::EmptyRecipients);
        }

        let mut credentials = Vec::with_capacity(unique.len());
        let mut entitled = BTreeMap::new();
        for recipient in unique {
            let token = mint_token()?;
            entitled.insert(recipient.clone(), digest(&token));
            credentials.push(RecipientCredential { recipient_id: recipient.clone(), token });
        }
        let sender_token = mint_token()?;

        self.store.insert(KeyRecord {
            message_id: message_id.to_owned(),
            key,
            sender_id: sender_id.to_owned(),
            sender_token_digest: digest(&sender_token),
            recipients: entitled,
            created_at: Utc::now(),
            fetches: Vec::new(),
        })?;
        tracing::info!(message_id, recipients = credentials.len(), "key registered");
        Ok(Registration { credentials, sender_token })
    }

    /// Releases the key to the recipient that owns `token`.
    ///
    /// `recipient_id`, when given, must also match the token's owner.
    pub fn fetch_key(
        &self,
        message_id: &str,
        recipient_id: Option<&str>,
        token: &str,
    ) -> Result<MessageKey, KeyServiceError> {
        let record = self.store.get(message_id).ok_or(KeyServiceError::NotFound)?;
        let presented = digest(token);
        let owner = record
            .recipients
            .iter()
            .find(|(_, d)| **d == presented)
            .map(|(id, _)| id.clone())
            .filter(|owner| recipient_id.is_none_or(|claimed| claimed == owner))
            .ok_or(KeyServiceError::AccessDenied)?;
        self.store.append_fetch(message_id, &owner, Utc::now())?;
        tracing::info!(message_id, recipient = %owner, "key released");
        Ok(record.key)
    }

    pub fn fetch_with_credential(
        &self,
        message_id: &str,
        credential: &RecipientCredential,
    ) -> Result<MessageKey, KeyServiceError> {
        self.fetch_key(message_id, Some(&credential.recipient_id), &credential.token)
    }

    pub fn audit(&self, message_id: &str, sender_token: &str) -> Result<Vec<Fetch>, KeyServiceError> {
        let record = self.store.get(message_id).ok_or(KeyServiceError::NotFound)?;
        if record.sender_token_digest != digest(sender_token) {
            return Err(KeyServiceError::AccessDenied);
        }
        Ok(record.fetches)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::MemoryStore;

    fn service() -> KeyService {
        KeyService::new(Arc::new(MemoryStore::new()))
    }

    fn key(byte: u8) -> MessageKey {
        MessageKey::from_parts(format!("key-{byte}"), &[byte; 16]).unwrap()
    }

    fn people(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn three_recipients_share_one_record() {
        let svc = service();
        let reg = svc.register_key("m", key(1), "alice", &people(&["bob", "carol", "dave"])).unwrap();
        assert_eq!(reg.credentials.len(), 3);
        assert_eq!(svc.store().len(), 1);
        for cred in &reg.credentials {
            assert_eq!(svc.fetch_with_credential("m", cred).unwrap().material(), &[1; 16]);
        }
    }

    #[test]
    fn duplicate_and_empty_registrations_fail() {
        let svc = service();
        svc.register_key("m", key(1), "alice", &people(&["bob"])).unwrap();
        assert!(matches!(
            svc.register_key("m", key(2), "alice", &people(&["bob"])),
            Err(KeyServiceError::DuplicateMessageId)
        ));
        assert!(matches!(
            svc.register_key("n", key(2), "alice", &[]),
            Err(KeyServiceError::EmptyRecipients)
        ));
    }

    #[test]
    fn tokens_are_long_and_distinct() {
        let svc = service();
        let reg = svc.register_key("m", key(1), "alice", &people(&["a", "b", "c"])).unwrap();
        let mut tokens: Vec<_> = reg.credentials.iter().map(|c| c.token.clone()).collect();
        tokens.push(reg.sender_token.clone());
        for t in &tokens {
            assert_eq!(mailseal_core::b64_decode(t).unwrap().len(), 32);
        }
        tokens.sort();
        tokens.dedup();
        assert_eq!(tokens.len(), 4);
    }

    #[test]
    fn credential_is_scoped_to_its_message() {
        let svc = service();
        let a = svc.register_key("m1", key(1), "alice", &people(&["bob"])).unwrap();
        svc.register_key("m2", key(2), "alice", &people(&["bob"])).unwrap();
        assert!(matches!(
            svc.fetch_with_credential("m2", &a.credentials[0]),
            Err(KeyServiceError::AccessDenied)
        ));
        assert!(matches!(svc.fetch_key("nope", None, "x"), Err(KeyServiceError::NotFound)));
    }

    #[test]
    fn claimed_identity_must_match_token() {
        let svc = service();
        let reg = svc.register_key("m", key(1), "alice", &people(&["bob", "carol"])).unwrap();
        let bob = reg.credentials.iter().find(|c| c.recipient_id == "bob").unwrap();
        assert!(matches!(
            svc.fetch_key("m", Some("carol"), &bob.token),
            Err(KeyServiceError::AccessDenied)
        ));
    }

    #[test]
    fn audit_tracks_fetches_for_the_sender_only() {
        let svc = service();
        let reg = svc.register_key("m", key(1), "alice", &people(&["bob"])).unwrap();
        svc.fetch_with_credential("m", &reg.credentials[0]).unwrap();
        assert_eq!(svc.audit("m", &reg.sender_token).unwrap().len(), 1);
        svc.fetch_with_credential("m", &reg.credentials[0]).unwrap();
        let log = svc.audit("m", &reg.sender_token).unwrap();
        assert_eq!(log.len(), 2);
        assert!(log[0].at <= log[1].at);
        assert!(log.iter().all(|f| f.recipient_id == "bob"));
        assert!(matches!(svc.audit("m", &reg.credentials[0].token), Err(KeyServiceError::AccessDenied)));
    }

    #[test]
    fn failed_fetches_are_not_logged() {
        let svc = service();
        let reg = svc.register_key("m", key(1), "alice", &people(&["bob"])).unwrap();
        let _ = svc.fetch_key("m", None, "guess");
        assert!(svc.audit("m", &reg.sender_token).unwrap().is_empty());
    }

    #[test]
    fn entitlement_is_exact_over_small_instances() {
        let svc = service();
        let messages = ["m0", "m1", "m2"];
        let recipients = people(&["r0", "r1", "r2"]);
        let mut minted = Vec::new();
        for (i, m) in messages.iter().enumerate() {
            let reg = svc.register_key(m, key(i as u8), "alice", &recipients).unwrap();
            for cred in reg.credentials {
                minted.push((m.to_string(), cred));
            }
        }
        assert_eq!(minted.len(), 9);
        for message in messages {
            for recipient in &recipients {
                for (owner_message, cred) in &minted {
                    let attempt = RecipientCredential { recipient_id: recipient.clone(), token: cred.token.clone() };
                    let should_succeed = owner_message == message && &cred.recipient_id == recipient;
                    let outcome = svc.fetch_with_credential(message, &attempt);
                    assert_eq!(outcome.is_ok(), should_succeed, "{message} {recipient} {owner_message}");
                }
            }
        }
    }

    #[test]
    fn concurrent_duplicate_registration_has_one_winner() {
        let svc = service();
        let winners: usize = std::thread::scope(|s| {
            let handles: Vec<_> = (0..16)
                .map(|i| {
                    let svc = svc.clone();
                    s.spawn(move || svc.register_key("race", key(i), "alice", &people(&["bob"])).is_ok() as usize)
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        });
        assert_eq!(winners, 1);
        assert_eq!(svc.store().len(), 1);
    }
}
