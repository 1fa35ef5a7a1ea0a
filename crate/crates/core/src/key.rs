use std::fmt;

use zeroize::Zeroize;

use crate::KernelError;

/// Length of AES-128 key material in bytes.
pub const KEY_LEN: usize = 16;

/// The single secret shared by every recipient of one message.
///
/// Material is wiped on drop and never printed by `Debug`.
#[derive(Clone, PartialEq, Eq)]
pub struct MessageKey {
    key_id: String,
    material: [u8; KEY_LEN],
}

impl MessageKey {
    /// Rebuilds a key from stored parts, e.g. after a fetch from the key service.
    pub fn from_parts(key_id: impl Into<String>, material: &[u8]) -> Result<Self, KernelError> {
        let material: [u8; KEY_LEN] = material
            .try_into()
            .map_err(|_| KernelError::MalformedEnvelope("key material must be 16 bytes"))?;
        Ok(Self { key_id: key_id.into(), material })
    }

    pub fn key_id(&self) -> &str {
        &self.key_id
    }

    pub fn material(&self) -> &[u8; KEY_LEN] {
        &self.material
    }
}

impl Drop for MessageKey {
    fn drop(&mut self) {
        self.material.zeroize();
    }
}

impl fmt::Debug for MessageKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MessageKey")
            .field("key_id", &self.key_id)
            .field("material", &"<redacted>")
            .finish()
    }
}

#[cfg(feature = "aead")]
pub(crate) fn random_bytes<const N: usize>() -> Result<[u8; N], KernelError> {
    let mut buf = [0u8; N];
    getrandom::getrandom(&mut buf).map_err(|_| KernelError::EntropyUnavailable)?;
    Ok(buf)
}

/// Draws fresh key material and a random UUID identifier from the OS CSPRNG.
#[cfg(feature = "aead")]
pub fn generate_key() -> Result<MessageKey, KernelError> {
    let material = random_bytes::<KEY_LEN>()?;
    let id = uuid::Builder::from_random_bytes(random_bytes::<16>()?).into_uuid();
    Ok(MessageKey { key_id: id.hyphenated().to_string(), material })
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn generated_key_is_128_bits() {
        let key = generate_key().unwrap();
        assert_eq!(key.material().len(), 16);
    }

    #[test]
    fn thousand_keys_are_distinct() {
        let mut materials = HashSet::new();
        let mut ids = HashSet::new();
        for _ in 0..1000 {
            let key = generate_key().unwrap();
            materials.insert(*key.material());
            ids.insert(key.key_id().to_owned());
        }
        assert_eq!(materials.len(), 1000);
        assert_eq!(ids.len(), 1000);
    }

    #[test]
    fn key_id_is_a_uuid() {
        let key = generate_key().unwrap();
        let parsed = uuid::Uuid::parse_str(key.key_id()).unwrap();
        assert_eq!(parsed.get_version_num(), 4);
    }

    #[test]
    fn debug_hides_material() {
        let key = MessageKey::from_parts("k", &[0xAB; 16]).unwrap();
        let shown = format!("{key:?}");
        assert!(!shown.to_lowercase().contains("ab, "));
        assert!(shown.contains("redacted"));
    }

    #[test]
    fn from_parts_rejects_wrong_length() {
        assert!(MessageKey::from_parts("k", &[0; 15]).is_err());
        assert!(MessageKey::from_parts("k", &[0; 32]).is_err());
    }
}
