//! The envelope payload of the reading page.

use mailseal_core::{b64_decode, decrypt_message, AssociatedData, EncryptedMessage, Envelope, KernelError, MessageKey, SecureMessage, MAX_ATTACHMENT_BYTES};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
struct Payload {
    message_id: String,
    parts: Vec<Part>,
}

#[derive(Debug, Deserialize)]
struct Part {
    version: String,
    nonce: String,
    adata: String,
    mac: String,
    ciphertext: String,
}

const BAD: KernelError = KernelError::MalformedEnvelope("invalid reading payload");

impl Part {
    fn envelope(&self) -> Result<Envelope, KernelError> {
        let version = match b64_decode(&self.version)?.as_slice() {
            [v] => *v,
            _ => return Err(BAD),
        };
        Ok(Envelope {
            version,
            nonce: b64_decode(&self.nonce)?.try_into().map_err(|_| BAD)?,
            ad: b64_decode(&self.adata)?,
            tag: b64_decode(&self.mac)?.try_into().map_err(|_| BAD)?,
            ciphertext: b64_decode(&self.ciphertext)?,
        })
    }
}

/// Rebuilds the ciphertext bundle. The first part is the body.
pub fn encrypted_from_payload(json: &str) -> Result<EncryptedMessage, KernelError> {
    let payload: Payload = serde_json::from_str(json).map_err(|_| BAD)?;
    let mut envelopes = payload.parts.iter().map(Part::envelope).collect::<Result<Vec<_>, _>>()?.into_iter();
    let body_envelope = envelopes.next().ok_or(BAD)?;
    Ok(EncryptedMessage { message_id: payload.message_id, body_envelope, attachment_envelopes: envelopes.collect() })
}

pub fn decrypt_payload(json: &str, key: &MessageKey) -> Result<SecureMessage, KernelError> {
    decrypt_message(&encrypted_from_payload(json)?, key)
}

pub fn part_ad(message_id: &str, sender_id: &str, index: i32) -> AssociatedData {
    match u32::try_from(index) {
        Ok(i) => AssociatedData::attachment(message_id, sender_id, i),
        Err(_) => AssociatedData::body(message_id, sender_id),
    }
}

/// Client-side size limit, checked before any bytes are encrypted.
pub fn check_attachment(index: usize, size: usize) -> Result<(), KernelError> {
    if size > MAX_ATTACHMENT_BYTES {
        return Err(KernelError::AttachmentTooLarge { index, size, limit: MAX_ATTACHMENT_BYTES });
    }
    Ok(())
}
