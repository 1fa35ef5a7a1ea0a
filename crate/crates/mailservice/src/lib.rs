//! The untrusted message service.
//!
//! It only ever handles envelopes: it stores one ciphertext bundle per
//! message, wraps the envelopes into a self-contained HTML attachment,
//! mails a notification to every recipient and serves the reading page that
//! bootstraps client-side decryption. It links the envelope codec but not the
//! AEAD operations, so it has no way to decrypt anything.

pub mod html;
pub mod http;
pub mod notification;
mod reading;
mod record;
mod service;
pub mod store;
pub mod transport;

pub use html::HtmlAttachment;
pub use notification::NotificationEmail;
pub use reading::{render_error_page, render_reading_page, ReadingPayload};
pub use record::{MessageRecord, MessageStatus, Recipient};
pub use service::{MessageService, MessageServiceError, NotifyOutcome, ServiceConfig};
pub use store::{DirMessageStore, MemoryMessageStore, MessageStore, StoreError};
pub use transport::{MailTransport, OutboxTransport, TransportError};

/// Message ids end up in file names, URLs and HTML, so they are restricted to
/// a conservative alphabet.
pub fn is_valid_message_id(id: &str) -> bool {
    (1..=128).contains(&id.len()) && id.bytes().all(|b| b.is_ascii_alphanumeric() || b"-_.".contains(&b)) && !id.starts_with('.')
}
