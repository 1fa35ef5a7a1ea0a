use std::fmt;
use std::str::FromStr;

use mailseal_core::{encode_envelope, Envelope};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const BLOCK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    Identity,
    BitFlip,
    BlockSplice,
    BlockDuplicate,
    Truncate,
    HtmlPrefixInject,
    AdSwap,
}

impl MutationKind {
    /// Every attack kind, without the identity control.
    pub const ATTACKS: [MutationKind; 6] = [
        MutationKind::BitFlip,
        MutationKind::BlockSplice,
        MutationKind::BlockDuplicate,
        MutationKind::Truncate,
        MutationKind::HtmlPrefixInject,
        MutationKind::AdSwap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MutationKind::Identity => "identity",
            MutationKind::BitFlip => "bit_flip",
            MutationKind::BlockSplice => "block_splice",
            MutationKind::BlockDuplicate => "block_duplicate",
            MutationKind::Truncate => "truncate",
            MutationKind::HtmlPrefixInject => "html_prefix_inject",
            MutationKind::AdSwap => "ad_swap",
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MutationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [MutationKind::Identity]
            .into_iter()
            .chain(MutationKind::ATTACKS)
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown mutation kind `{s}`"))
    }
}

/// One manipulation of an envelope.
///
/// Bit and truncation positions address the binary wire layout; block and
/// injection positions address the ciphertext.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mutation {
    Identity,
    BitFlip { bit: usize },
    /// Swap two 16-byte ciphertext blocks.
    BlockSplice { first: usize, second: usize },
    /// Insert a copy of a ciphertext block right after it.
    BlockDuplicate { block: usize },
    /// Drop this many bytes from the end of the wire encoding.
    Truncate { bytes: usize },
    /// Insert attacker bytes into the ciphertext.
    HtmlPrefixInject {
        offset: usize,
        #[serde(with = "text_bytes")]
        payload: Vec<u8>,
    },
    /// Replace the associated data with another envelope's.
    AdSwap {
        #[serde(with = "b64_bytes")]
        donor_ad: Vec<u8>,
    },
}

impl Mutation {
    pub fn kind(&self) -> MutationKind {
        match self {
            Mutation::Identity => MutationKind::Identity,
            Mutation::BitFlip { .. } => MutationKind::BitFlip,
            Mutation::BlockSplice { .. } => MutationKind::BlockSplice,
            Mutation::BlockDuplicate { .. } => MutationKind::BlockDuplicate,
            Mutation::Truncate { .. } => MutationKind::Truncate,
            Mutation::HtmlPrefixInject { .. } => MutationKind::HtmlPrefixInject,
            Mutation::AdSwap { .. } => MutationKind::AdSwap,
        }
    }

    pub fn is_control(&self) -> bool {
        matches!(self, Mutation::Identity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("{kind} position out of bounds")]
    OutOfBounds { kind: MutationKind },
}

fn full_block(ciphertext: &[u8], index: usize) -> bool {
    index.checked_add(1).and_then(|n| n.checked_mul(BLOCK)).is_some_and(|end| end <= ciphertext.len())
}

/// Applies `mutation` to a copy of `envelope` and returns the resulting wire
/// bytes. Every kind except `Truncate` (and bit flips in the length header)
/// yields bytes that still decode.
pub fn mutate(envelope: &Envelope, mutation: &Mutation) -> Result<Vec<u8>, MutationError> {
    let oob = Err(MutationError::OutOfBounds { kind: mutation.kind() });
    let ct = &envelope.ciphertext;
    match mutation {
        Mutation::Identity => Ok(encode_envelope(envelope)),
        Mutation::BitFlip { bit } => {
            let mut wire = encode_envelope(envelope);
            if *bit >= wire.len() * 8 {
                return oob;
            }
            wire[bit / 8] ^= 1 << (bit % 8);
            Ok(wire)
        }
        Mutation::BlockSplice { first, second } => {
            if first == second || !full_block(ct, *first) || !full_block(ct, *second) {
                return oob;
            }
            let mut env = envelope.clone();
            for i in 0..BLOCK {
                env.ciphertext.swap(first * BLOCK + i, second * BLOCK + i);
            }
            Ok(encode_envelope(&env))
        }
        Mutation::BlockDuplicate { block } => {
            if !full_block(ct, *block) {
                return oob;
            }
            let mut env = envelope.clone();
            let at = (block + 1) * BLOCK;
            let copy = ct[block * BLOCK..at].to_vec();
            env.ciphertext.splice(at..at, copy);
            Ok(encode_envelope(&env))
        }
        Mutation::Truncate { bytes } => {
            let mut wire = encode_envelope(envelope);
            if *bytes == 0 || *bytes > wire.len() {
                return oob;
            }
            wire.truncate(wire.len() - bytes);
            Ok(wire)
        }
        Mutation::HtmlPrefixInject { offset, payload } => {
            if *offset > ct.len() || payload.is_empty() {
                return oob;
            }
            let mut env = envelope.clone();
            env.ciphertext.splice(*offset..*offset, payload.iter().copied());
            Ok(encode_envelope(&env))
        }
        Mutation::AdSwap { donor_ad } => {
            if donor_ad.is_empty() {
                return oob;
            }
            let mut env = envelope.clone();
            env.ad = donor_ad.clone();
            Ok(encode_envelope(&env))
        }
    }
}

mod text_bytes {
    use super::*;

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&String::from_utf8_lossy(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        Ok(String::deserialize(d)?.into_bytes())
    }
}

mod b64_bytes {
    use super::*;

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&mailseal_core::b64_encode(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        mailseal_core::b64_decode(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
