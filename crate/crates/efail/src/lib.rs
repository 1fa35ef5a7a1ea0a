//! EFail-style adversary for the envelope format.
//!
//! The attacks against OpenPGP and S/MIME mail rely on malleable ciphertext:
//! flipping bits, moving or repeating blocks (the CBC/CFB gadget variants) or
//! wrapping the ciphertext in attacker HTML (direct exfiltration). This crate
//! applies those manipulations to sealed envelopes and records whether the
//! opener accepted the result and how many plaintext bytes it released.

mod mutation;
mod report;
mod suite;

pub use mutation::{mutate, Mutation, MutationError, MutationKind};
pub use report::{KindTotals, Summary};
pub use suite::{plan_exhaustive, plan_sampled, run_suite, AeadOpener, MutationReport, Opener, SuiteError, DEFAULT_EXFIL_PREFIX};
