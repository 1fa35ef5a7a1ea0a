//! The trusted key service.
//!
//! This is the only component that ever holds message keys. It accepts one
//! key per message from the sender, mints a bearer credential per recipient,
//! releases the key to holders of those credentials and keeps an append-only
//! log of every release.

pub mod http;
mod record;
mod service;
pub mod store;

pub use record::{Fetch, KeyRecord, RecipientCredential};
pub use service::{KeyService, KeyServiceError, Registration};
pub use store::{FileStore, KeyStore, MemoryStore, StoreError};
