//! Envelope wire format.
//!
//! Binary layout, all integers big-endian:
//!
//! ```text
//! version(1) || nonce(12) || ad_len(4) || ad(ad_len) || tag(16) || ciphertext(rest)
//! ```
//!
//! The text transport is base64url of the binary layout without padding.
//! Decoding is purely structural: associated data is kept as the raw bytes
//! that were authenticated and only interpreted after the tag verifies.

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::{AssociatedData, KernelError};

pub const VERSION: u8 = 0x01;
pub const NONCE_LEN: usize = 12;
pub const TAG_LEN: usize = 16;
const AD_LEN_LEN: usize = 4;
const HEADER_LEN: usize = 1 + NONCE_LEN + AD_LEN_LEN;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub version: u8,
    pub nonce: [u8; NONCE_LEN],
    /// Canonical associated-data bytes as authenticated by the tag.
    pub ad: Vec<u8>,
    pub tag: [u8; TAG_LEN],
    pub ciphertext: Vec<u8>,
}

impl Envelope {
    /// Parses the associated data. Only meaningful once the envelope has opened.
    pub fn associated_data(&self) -> Result<AssociatedData, KernelError> {
        AssociatedData::from_canonical_bytes(&self.ad)
    }

    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + self.ad.len() + TAG_LEN + self.ciphertext.len()
    }

    /// Byte offset of the ciphertext within the binary layout.
    pub fn ciphertext_offset(&self) -> usize {
        HEADER_LEN + self.ad.len() + TAG_LEN
    }
}

pub fn encode_envelope(envelope: &Envelope) -> Vec<u8> {
    let mut out = Vec::with_capacity(envelope.encoded_len());
    out.push(envelope.version);
    out.extend_from_slice(&envelope.nonce);
    out.extend_from_slice(&(envelope.ad.len() as u32).to_be_bytes());
    out.extend_from_slice(&envelope.ad);
    out.extend_from_slice(&envelope.tag);
    out.extend_from_slice(&envelope.ciphertext);
    out
}

pub fn decode_envelope(bytes: &[u8]) -> Result<Envelope, KernelError> {
    let Some((&version, rest)) = bytes.split_first() else {
        return Err(KernelError::MalformedEnvelope("empty envelope"));
    };
    if version != VERSION {
        return Err(KernelError::UnsupportedVersion(version));
    }
    if bytes.len() < HEADER_LEN + TAG_LEN {
        return Err(KernelError::MalformedEnvelope("envelope shorter than fixed header"));
    }
    let (nonce, rest) = rest.split_at(NONCE_LEN);
    let (ad_len, rest) = rest.split_at(AD_LEN_LEN);
    let ad_len = u32::from_be_bytes(ad_len.try_into().unwrap()) as usize;
    if rest.len() < ad_len || rest.len() - ad_len < TAG_LEN {
        return Err(KernelError::MalformedEnvelope("associated data length out of range"));
    }
    let (ad, rest) = rest.split_at(ad_len);
    let (tag, ciphertext) = rest.split_at(TAG_LEN);
    Ok(Envelope {
        version,
        nonce: nonce.try_into().unwrap(),
        ad: ad.to_vec(),
        tag: tag.try_into().unwrap(),
        ciphertext: ciphertext.to_vec(),
    })
}

pub fn encode_envelope_text(envelope: &Envelope) -> String {
    crate::b64_encode(&encode_envelope(envelope))
}

pub fn decode_envelope_text(text: &str) -> Result<Envelope, KernelError> {
    decode_envelope(&crate::b64_decode(text)?)
}

impl Serialize for Envelope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&encode_envelope_text(self))
    }
}

impl<'de> Deserialize<'de> for Envelope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        decode_envelope_text(&text).map_err(de::Error::custom)
    }
}
