use aes_gcm::aead::AeadInPlace;
use aes_gcm::{Aes128Gcm, KeyInit, Nonce, Tag};
use zeroize::Zeroize;

use crate::envelope::{NONCE_LEN, TAG_LEN, VERSION};
use crate::key::random_bytes;
use crate::{AssociatedData, Envelope, KernelError, MessageKey};

/// Seals `plaintext` under `key` with a fresh random 96-bit nonce.
pub fn seal(plaintext: &[u8], key: &MessageKey, ad: &AssociatedData) -> Result<Envelope, KernelError> {
    let nonce = random_bytes::<NONCE_LEN>()?;
    Ok(seal_inner(plaintext, key.material(), nonce, ad.to_canonical_bytes()))
}

/// Returns the plaintext only if the tag verifies over nonce, ciphertext and
/// the envelope's associated-data bytes.
pub fn open(envelope: &Envelope, key: &MessageKey) -> Result<Vec<u8>, KernelError> {
    if envelope.version != VERSION {
        return Err(KernelError::UnsupportedVersion(envelope.version));
    }
    let cipher = Aes128Gcm::new(key.material().into());
    let mut buffer = envelope.ciphertext.clone();
    match cipher.decrypt_in_place_detached(
        Nonce::from_slice(&envelope.nonce),
        &envelope.ad,
        &mut buffer,
        Tag::from_slice(&envelope.tag),
    ) {
        Ok(()) => Ok(buffer),
        Err(_) => {
            buffer.zeroize();
            Err(KernelError::AuthenticationFailed)
        }
    }
}

fn seal_inner(plaintext: &[u8], material: &[u8; 16], nonce: [u8; NONCE_LEN], ad: Vec<u8>) -> Envelope {
    let (ciphertext, tag) = seal_detached(material, &nonce, plaintext, &ad);
    Envelope { version: VERSION, nonce, ad, tag, ciphertext }
}

fn seal_detached(material: &[u8; 16], nonce: &[u8; NONCE_LEN], plaintext: &[u8], aad: &[u8]) -> (Vec<u8>, [u8; TAG_LEN]) {
    let cipher = Aes128Gcm::new(material.into());
    let mut buffer = plaintext.to_vec();
    let tag = cipher
        .encrypt_in_place_detached(Nonce::from_slice(nonce), aad, &mut buffer)
        .expect("AES-GCM length limits exceeded");
    (buffer, tag.into())
}

#[cfg(feature = "test-hooks")]
pub fn seal_with_nonce(
    plaintext: &[u8],
    key: &MessageKey,
    nonce: [u8; NONCE_LEN],
    ad: &AssociatedData,
) -> Envelope {
    seal_inner(plaintext, key.material(), nonce, ad.to_canonical_bytes())
}

/// Raw AES-128-GCM with caller-chosen nonce and arbitrary AAD, for known-answer vectors.
#[cfg(feature = "test-hooks")]
pub fn seal_raw_with_nonce(
    material: &[u8; 16],
    nonce: &[u8; NONCE_LEN],
    plaintext: &[u8],
    aad: &[u8],
) -> (Vec<u8>, [u8; TAG_LEN]) {
    seal_detached(material, nonce, plaintext, aad)
}
