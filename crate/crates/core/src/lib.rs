//! Client-side authenticated encryption for secure mail.
//!
//! Every part of a message (the body and each attachment) is sealed into an
//! [`Envelope`] with AES-128-GCM under a single per-message [`MessageKey`].
//! The envelope binds a canonical [`AssociatedData`] record so that parts
//! cannot be moved between messages or reordered without detection.
//!
//! The codec half of this crate ([`envelope`], [`ad`], [`MessageKey`] as a
//! plain value) is always available. Operations that touch key material are
//! behind the `aead` feature, which is on by default.

pub mod ad;
pub mod envelope;
mod error;
mod key;
pub mod message;

#[cfg(feature = "aead")]
mod aead;

pub use ad::{AssociatedData, PartLabel};
pub use envelope::{decode_envelope, decode_envelope_text, encode_envelope, encode_envelope_text, Envelope};
pub use error::KernelError;
pub use key::{MessageKey, KEY_LEN};
pub use message::{Attachment, EncryptedMessage, SecureMessage, MAX_ATTACHMENT_BYTES};

#[cfg(feature = "aead")]
pub use aead::{open, seal};
#[cfg(feature = "aead")]
pub use key::generate_key;
#[cfg(feature = "aead")]
pub use message::{decrypt_message, encrypt_message};

#[cfg(feature = "test-hooks")]
#[doc(hidden)]
pub use aead::{seal_raw_with_nonce, seal_with_nonce};

/// Base64url without padding, the text transport for envelopes and keys.
pub fn b64_encode(bytes: &[u8]) -> String {
    use base64::Engine;
    base64::engine::general_purpose::URL_SAFE_NO_PAD.encode(bytes)
}

pub fn b64_decode(text: &str) -> Result<Vec<u8>, KernelError> {
    use base64::Engine;
    base64::engine::general_purpose::URL_SAFE_NO_PAD
        .decode(text.trim())
        .map_err(|_| KernelError::MalformedEnvelope("invalid base64url"))
}
