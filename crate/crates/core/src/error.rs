use thiserror::Error;

/// Kernel failures. No variant carries plaintext.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("secure random source unavailable")]
    EntropyUnavailable,
    #[error("authentication failed")]
    AuthenticationFailed,
    #[error("malformed envelope: {0}")]
    MalformedEnvelope(&'static str),
    #[error("unsupported envelope version {0:#04x}")]
    UnsupportedVersion(u8),
    #[error("attachment {index} is {size} bytes, over the {limit} byte limit")]
    AttachmentTooLarge { index: usize, size: usize, limit: usize },
}

impl KernelError {
    /// Stable identifier used in reports and HTTP error bodies.
    pub fn kind(&self) -> &'static str {
        match self {
            KernelError::EntropyUnavailable => "EntropyUnavailable",
            KernelError::AuthenticationFailed => "AuthenticationFailed",
            KernelError::MalformedEnvelope(_) => "MalformedEnvelope",
            KernelError::UnsupportedVersion(_) => "UnsupportedVersion",
            KernelError::AttachmentTooLarge { .. } => "AttachmentTooLarge",
        }
    }
}
