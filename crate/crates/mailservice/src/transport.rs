use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::NotificationEmail;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("delivery to {recipient} failed: {reason}")]
pub struct TransportError {
    pub recipient: String,
    pub reason: String,
}

pub trait MailTransport: Send + Sync {
    fn deliver(&self, email: &NotificationEmail) -> Result<(), TransportError>;
}

/// Writes each notification as an `.eml` file into an outbox directory.
pub struct OutboxTransport {
    dir: PathBuf,
}

impl OutboxTransport {
    pub fn new(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(Self { dir: dir.as_ref().to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

impl MailTransport for OutboxTransport {
    fn deliver(&self, email: &NotificationEmail) -> Result<(), TransportError> {
        let fail = |e: std::io::Error| TransportError { recipient: email.to.clone(), reason: e.to_string() };
        let stem = format!(
            "{}-{}",
            email.attachment.message_id,
            email.to.replace(|c: char| !c.is_ascii_alphanumeric() && c != '.' && c != '-', "_")
        );
        let tmp = self.dir.join(format!(".{stem}.tmp"));
        fs::write(&tmp, email.to_rfc822()).map_err(fail)?;
        fs::rename(&tmp, self.dir.join(format!("{stem}.eml"))).map_err(fail)
    }
}
