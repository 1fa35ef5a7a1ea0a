//! Browser bindings for the message kernel.
//!
//! Build with `wasm-pack build crates/wasm --target web` (or `cargo build
//! --target wasm32-unknown-unknown` followed by `wasm-bindgen --target web`)
//! and copy the output to `www/pkg/`. The page in `www/` is served by the
//! message service under `/static`.
//!
//! Everything exported here is a thin wrapper over plain Rust functions in
//! [`posted`] and [`demo`], which is where the tests live.

use mailseal_core::{AssociatedData, KernelError, MessageKey, SecureMessage};
use wasm_bindgen::prelude::*;

pub mod demo;
pub mod posted;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// A message key held inside the module.
#[wasm_bindgen]
pub struct Key(MessageKey);

#[wasm_bindgen]
impl Key {
    #[wasm_bindgen(js_name = fromB64)]
    pub fn from_b64(key_id: &str, key_b64: &str) -> Result<Key, JsError> {
        let material = mailseal_core::b64_decode(key_b64).map_err(js_err)?;
        MessageKey::from_parts(key_id, &material).map(Key).map_err(js_err)
    }

    #[wasm_bindgen(getter, js_name = keyId)]
    pub fn key_id(&self) -> String {
        self.0.key_id().to_owned()
    }

    /// Key material for registration with the key service.
    #[wasm_bindgen(js_name = toB64)]
    pub fn to_b64(&self) -> String {
        mailseal_core::b64_encode(self.0.material())
    }
}

#[wasm_bindgen(js_name = generateKey)]
pub fn generate_key() -> Result<Key, JsError> {
    mailseal_core::generate_key().map(Key).map_err(js_err)
}

/// Canonical associated data for a part. A negative `index` means the body.
#[wasm_bindgen(js_name = associatedData)]
pub fn associated_data(message_id: &str, sender_id: &str, index: i32) -> Vec<u8> {
    posted::part_ad(message_id, sender_id, index).to_canonical_bytes()
}

/// Seals `plaintext` and returns the binary envelope.
#[wasm_bindgen]
pub fn seal(plaintext: &[u8], key: &Key, ad: &[u8]) -> Result<Vec<u8>, JsError> {
    let ad = AssociatedData::from_canonical_bytes(ad).map_err(js_err)?;
    let envelope = mailseal_core::seal(plaintext, &key.0, &ad).map_err(js_err)?;
    Ok(mailseal_core::encode_envelope(&envelope))
}

#[wasm_bindgen]
pub fn open(envelope: &[u8], key: &Key) -> Result<Vec<u8>, JsError> {
    let envelope = mailseal_core::decode_envelope(envelope).map_err(js_err)?;
    mailseal_core::open(&envelope, &key.0).map_err(js_err)
}

/// Collects a message in the page before encryption.
#[wasm_bindgen]
pub struct MessageBuilder(SecureMessage);

#[wasm_bindgen]
impl MessageBuilder {
    #[wasm_bindgen(constructor)]
    pub fn new(subject: String, body: String) -> MessageBuilder {
        MessageBuilder(SecureMessage { subject, body, attachments: Vec::new() })
    }

    #[wasm_bindgen(js_name = addAttachment)]
    pub fn add_attachment(&mut self, filename: String, data: Vec<u8>) -> Result<(), JsError> {
        posted::check_attachment(self.0.attachments.len(), data.len()).map_err(js_err)?;
        self.0.attachments.push(mailseal_core::Attachment { filename, data });
        Ok(())
    }

    /// Encrypts every part and returns the ciphertext bundle as JSON, in the
    /// shape accepted by `POST /messages`.
    pub fn encrypt(&self, key: &Key, message_id: &str, sender_id: &str) -> Result<String, JsError> {
        let enc = mailseal_core::encrypt_message(&self.0, &key.0, message_id, sender_id).map_err(js_err)?;
        serde_json::to_string(&enc).map_err(js_err)
    }
}

/// A decrypted message. Nothing is exposed unless every part authenticated.
#[wasm_bindgen]
pub struct Opened(SecureMessage);

#[wasm_bindgen]
impl Opened {
    #[wasm_bindgen(getter)]
    pub fn subject(&self) -> String {
        self.0.subject.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn body(&self) -> String {
        self.0.body.clone()
    }

    #[wasm_bindgen(getter, js_name = attachmentCount)]
    pub fn attachment_count(&self) -> usize {
        self.0.attachments.len()
    }

    #[wasm_bindgen(js_name = attachmentName)]
    pub fn attachment_name(&self, index: usize) -> Option<String> {
        self.0.attachments.get(index).map(|a| a.filename.clone())
    }

    #[wasm_bindgen(js_name = attachmentData)]
    pub fn attachment_data(&self, index: usize) -> Option<Vec<u8>> {
        self.0.attachments.get(index).map(|a| a.data.clone())
    }
}

/// Decrypts a bundle produced by [`MessageBuilder::encrypt`].
#[wasm_bindgen(js_name = decryptMessage)]
pub fn decrypt_message(encrypted_json: &str, key: &Key) -> Result<Opened, JsError> {
    let enc = serde_json::from_str(encrypted_json).map_err(js_err)?;
    mailseal_core::decrypt_message(&enc, &key.0).map(Opened).map_err(js_err)
}

/// Decrypts the payload embedded in the reading page.
#[wasm_bindgen(js_name = decryptPosted)]
pub fn decrypt_posted(payload_json: &str, key: &Key) -> Result<Opened, JsError> {
    posted::decrypt_payload(payload_json, &key.0).map(Opened).map_err(js_err)
}

/// `true` when `message` names a failed integrity check, so the page can
/// show a tamper warning instead of a generic error.
#[wasm_bindgen(js_name = isTamperError)]
pub fn is_tamper_error(message: &str) -> bool {
    message == KernelError::AuthenticationFailed.to_string()
}

/// Seals `text`, applies one manipulation and tries to open the result.
/// Returns a JSON report.
#[wasm_bindgen(js_name = tamperLab)]
pub fn tamper_lab(text: &str, kind: &str, position: usize) -> Result<String, JsError> {
    let report = demo::tamper(text.as_bytes(), kind, position).map_err(js_err)?;
    serde_json::to_string(&report).map_err(js_err)
}

#[wasm_bindgen]
extern "C" {
    #[wasm_bindgen(js_namespace = performance, js_name = now)]
    fn performance_now() -> f64;
}

struct PerformanceClock;

impl mailseal_bench::Clock for PerformanceClock {
    fn now_ms(&self) -> f64 {
        performance_now()
    }
}

/// Times one benchmark cell with `performance.now` and returns the samples
/// as JSON.
#[wasm_bindgen(js_name = benchCell)]
pub fn bench_cell(op: &str, size_bytes: usize, repetitions: usize, seed: u64) -> Result<String, JsError> {
    let samples = demo::bench_cell(op, size_bytes, repetitions, seed, &PerformanceClock).map_err(js_err)?;
    serde_json::to_string(&samples).map_err(js_err)
}

/// Turns collected samples into the results CSV.
#[wasm_bindgen(js_name = benchCsv)]
pub fn bench_csv(samples_json: &str, repetitions: usize) -> Result<String, JsError> {
    demo::bench_csv(samples_json, repetitions).map_err(js_err)
}

/// Normalized-time chart for collected samples.
#[wasm_bindgen(js_name = benchSvg)]
pub fn bench_svg(samples_json: &str, repetitions: usize) -> Result<String, JsError> {
    demo::bench_svg(samples_json, repetitions).map_err(js_err)
}
