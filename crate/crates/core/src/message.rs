//! Whole-message encryption: one body envelope plus one envelope per attachment,
//! all under a single shared key.
//!
//! Part plaintexts carry a small frame so that subject and filenames are
//! encrypted along with the content:
//!
//! ```text
//! body       = u32 BE attachment_count || u32 BE subject_len || subject || body text
//! attachment = u32 BE filename_len || filename || bytes
//! ```
//!
//! The count in the body frame detects dropped trailing attachments.

use serde::{Deserialize, Serialize};

use crate::{AssociatedData, Envelope, KernelError, PartLabel};

/// Largest accepted attachment, 20 MiB.
pub const MAX_ATTACHMENT_BYTES: usize = 20 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SecureMessage {
    pub subject: String,
    pub body: String,
    pub attachments: Vec<Attachment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub filename: String,
    pub data: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncryptedMessage {
    pub message_id: String,
    pub body_envelope: Envelope,
    pub attachment_envelopes: Vec<Envelope>,
}

impl EncryptedMessage {
    pub fn envelopes(&self) -> impl Iterator<Item = &Envelope> {
        std::iter::once(&self.body_envelope).chain(&self.attachment_envelopes)
    }

    /// Structural checks that need no key: every envelope's associated data
    /// parses, names this message, and sits at its declared position.
    pub fn validate_structure(&self) -> Result<(), KernelError> {
        for (position, envelope) in self.envelopes().enumerate() {
            let ad = envelope.associated_data()?;
            if !part_matches(&ad, &self.message_id, position) {
                return Err(KernelError::MalformedEnvelope("part associated data out of place"));
            }
        }
        Ok(())
    }

    pub fn ciphertext_bytes(&self) -> usize {
        self.envelopes().map(|e| e.ciphertext.len()).sum()
    }
}

// position 0 is the body, position i + 1 is attachment i.
fn part_matches(ad: &AssociatedData, message_id: &str, position: usize) -> bool {
    if ad.message_id != message_id {
        return false;
    }
    match position {
        0 => ad.part_label == PartLabel::Body && ad.part_index == 0,
        n => ad.part_label == PartLabel::Attachment && ad.part_index as usize == n - 1,
    }
}

#[cfg(feature = "aead")]
fn frame(label: &str, content: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + label.len() + content.len());
    out.extend_from_slice(&(label.len() as u32).to_be_bytes());
    out.extend_from_slice(label.as_bytes());
    out.extend_from_slice(content);
    out
}

#[cfg(feature = "aead")]
fn unframe(mut plaintext: Vec<u8>) -> Result<(String, Vec<u8>), KernelError> {
    const BAD: KernelError = KernelError::MalformedEnvelope("bad part frame");
    if plaintext.len() < 4 {
        return Err(BAD);
    }
    let len = u32::from_be_bytes(plaintext[..4].try_into().unwrap()) as usize;
    if plaintext.len() - 4 < len {
        return Err(BAD);
    }
    let content = plaintext.split_off(4 + len);
    let label = String::from_utf8(plaintext.split_off(4)).map_err(|_| BAD)?;
    Ok((label, content))
}

#[cfg(feature = "aead")]
fn declared_count(body: &[u8]) -> Option<usize> {
    body.get(..4).map(|b| u32::from_be_bytes(b.try_into().unwrap()) as usize)
}

#[cfg(feature = "aead")]
pub use self::ops::{decrypt_message, encrypt_message};

#[cfg(feature = "aead")]
mod ops {
    use zeroize::Zeroize;

    use super::*;
    use crate::{open, seal, MessageKey};

    pub fn encrypt_message(
        msg: &SecureMessage,
        key: &MessageKey,
        message_id: &str,
        sender_id: &str,
    ) -> Result<EncryptedMessage, KernelError> {
        for (index, attachment) in msg.attachments.iter().enumerate() {
            if attachment.data.len() > MAX_ATTACHMENT_BYTES {
                return Err(KernelError::AttachmentTooLarge {
                    index,
                    size: attachment.data.len(),
                    limit: MAX_ATTACHMENT_BYTES,
                });
            }
        }
        let mut body = (msg.attachments.len() as u32).to_be_bytes().to_vec();
        body.extend_from_slice(&frame(&msg.subject, msg.body.as_bytes()));
        let body_envelope = seal(&body, key, &AssociatedData::body(message_id, sender_id));
        body.zeroize();
        let body_envelope = body_envelope?;

        let mut attachment_envelopes = Vec::with_capacity(msg.attachments.len());
        for (index, attachment) in msg.attachments.iter().enumerate() {
            let mut framed = frame(&attachment.filename, &attachment.data);
            let ad = AssociatedData::attachment(message_id, sender_id, index as u32);
            let sealed = seal(&framed, key, &ad);
            framed.zeroize();
            attachment_envelopes.push(sealed?);
        }
        Ok(EncryptedMessage { message_id: message_id.to_owned(), body_envelope, attachment_envelopes })
    }

    /// Opens the body first and then each attachment in order. If any part
    /// fails, everything decrypted so far is wiped and only the error returns.
    pub fn decrypt_message(enc: &EncryptedMessage, key: &MessageKey) -> Result<SecureMessage, KernelError> {
        let mut opened: Vec<Vec<u8>> = Vec::with_capacity(1 + enc.attachment_envelopes.len());
        for (position, envelope) in enc.envelopes().enumerate() {
            let result = open(envelope, key).and_then(|plaintext| {
                // The associated data is authentic now; check it names this slot.
                match envelope.associated_data() {
                    Ok(ad)
                        if part_matches(&ad, &enc.message_id, position)
                            && (position > 0 || declared_count(&plaintext) == Some(enc.attachment_envelopes.len())) =>
                    {
                        Ok(plaintext)
                    }
                    _ => {
                        let mut plaintext = plaintext;
                        plaintext.zeroize();
                        Err(KernelError::AuthenticationFailed)
                    }
                }
            });
            match result {
                Ok(plaintext) => opened.push(plaintext),
                Err(err) => {
                    opened.iter_mut().for_each(|p| p.zeroize());
                    return Err(err);
                }
            }
        }

        let mut parts = opened.into_iter();
        let mut body = parts.next().expect("body part");
        let (subject, body) = unframe(body.split_off(4))?;
        let body = String::from_utf8(body).map_err(|_| KernelError::MalformedEnvelope("body is not UTF-8"))?;
        let attachments = parts
            .map(|p| unframe(p).map(|(filename, data)| Attachment { filename, data }))
            .collect::<Result<_, _>>()?;
        Ok(SecureMessage { subject, body, attachments })
    }
}
