//! Operations behind the demo page: the tamper lab and the in-browser
//! benchmark.

use mailseal_bench::{analyze, gen_payload, render_svg, time_kernel, write_csv, BenchReport, BenchSample, Clock, Impl, Op};
use mailseal_core::{decode_envelope, generate_key, open, seal, AssociatedData, Envelope};
use mailseal_efail::{mutate, Mutation, MutationKind, DEFAULT_EXFIL_PREFIX};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct TamperOutcome {
    pub mutation: Mutation,
    pub rejected: bool,
    pub error: Option<String>,
    /// Recovered text, only when the envelope opened.
    pub recovered: Option<String>,
}

fn mutation_for(kind: MutationKind, position: usize, donor: &Envelope) -> Mutation {
    match kind {
        MutationKind::Identity => Mutation::Identity,
        MutationKind::BitFlip => Mutation::BitFlip { bit: position },
        MutationKind::BlockSplice => Mutation::BlockSplice { first: position, second: position + 1 },
        MutationKind::BlockDuplicate => Mutation::BlockDuplicate { block: position },
        MutationKind::Truncate => Mutation::Truncate { bytes: position.max(1) },
        MutationKind::HtmlPrefixInject => {
            Mutation::HtmlPrefixInject { offset: position, payload: DEFAULT_EXFIL_PREFIX.to_vec() }
        }
        MutationKind::AdSwap => Mutation::AdSwap { donor_ad: donor.ad.clone() },
    }
}

/// Seals `text` as the body of a one-attachment message, applies the chosen
/// manipulation and opens the result with the right key.
pub fn tamper(text: &[u8], kind: &str, position: usize) -> Result<TamperOutcome, String> {
    let kind: MutationKind = kind.parse()?;
    let key = generate_key().map_err(|e| e.to_string())?;
    let envelope = seal(text, &key, &AssociatedData::body("demo", "demo")).map_err(|e| e.to_string())?;
    let donor = seal(b"", &key, &AssociatedData::attachment("demo", "demo", 0)).map_err(|e| e.to_string())?;
    let mutation = mutation_for(kind, position, &donor);
    let wire = mutate(&envelope, &mutation).map_err(|e| e.to_string())?;
    let outcome = decode_envelope(&wire).and_then(|env| open(&env, &key));
    Ok(match outcome {
        Ok(plaintext) => TamperOutcome {
            mutation,
            rejected: false,
            error: None,
            recovered: Some(String::from_utf8_lossy(&plaintext).into_owned()),
        },
        Err(e) => TamperOutcome { mutation, rejected: true, error: Some(e.kind().to_owned()), recovered: None },
    })
}

pub fn bench_cell(op: &str, size_bytes: usize, repetitions: usize, seed: u64, clock: &dyn Clock) -> Result<Vec<BenchSample>, String> {
    let op: Op = op.parse()?;
    let payload = gen_payload(size_bytes, seed);
    time_kernel(Impl::KernelPortable, op, &payload, repetitions, clock).map_err(|e| e.to_string())
}

fn report(samples_json: &str, repetitions: usize) -> Result<BenchReport, String> {
    let samples: Vec<BenchSample> = serde_json::from_str(samples_json).map_err(|e| e.to_string())?;
    analyze(&samples, repetitions).map_err(|e| e.to_string())
}

pub fn bench_csv(samples_json: &str, repetitions: usize) -> Result<String, String> {
    let mut out = Vec::new();
    write_csv(&report(samples_json, repetitions)?, &mut out).map_err(|e| e.to_string())?;
    String::from_utf8(out).map_err(|e| e.to_string())
}

pub fn bench_svg(samples_json: &str, repetitions: usize) -> Result<String, String> {
    Ok(render_svg(&report(samples_json, repetitions)?))
}


#[cfg(test)]
mod tests {
    use std::cell::Cell;

    use mailseal_bench::{read_csv, MIB};

    use super::*;

    #[test]
    fn untouched_envelope_opens() {
        let out = tamper(b"hello", "identity", 0).unwrap();
        assert!(!out.rejected);
        assert_eq!(out.recovered.as_deref(), Some("hello"));
    }

    #[test]
    fn every_attack_is_rejected() {
        let text = b"Meet at the usual place at nine. Bring the documents.";
        for kind in MutationKind::ATTACKS {
            let out = tamper(text, kind.as_str(), 1).unwrap();
            assert!(out.rejected, "{kind}");
            assert!(out.recovered.is_none());
        }
        let out = tamper(text, "bit_flip", 8 * 40).unwrap();
        assert_eq!(out.error.as_deref(), Some("AuthenticationFailed"));
    }

    #[test]
    fn unknown_kind_and_out_of_range_position() {
        assert!(tamper(b"x", "rot13", 0).is_err());
        assert!(tamper(b"short", "block_splice", 5).is_err());
    }

    struct Ticking(Cell<f64>);
    impl Clock for Ticking {
        fn now_ms(&self) -> f64 {
            let t = self.0.get();
            self.0.set(t + 0.5);
            t
        }
    }

    #[test]
    fn bench_pipeline_produces_the_shared_csv() {
        let clock = Ticking(Cell::new(0.0));
        let mut samples = Vec::new();
        for size in [MIB, 2 * MIB] {
            for op in ["encrypt", "decrypt"] {
                samples.extend(bench_cell(op, size, 2, 1, &clock).unwrap());
            }
        }
        assert!(samples.iter().all(|s| s.implementation == Impl::KernelPortable));
        let json = serde_json::to_string(&samples).unwrap();
        let csv = bench_csv(&json, 2).unwrap();
        assert!(csv.starts_with("impl,op,size_bytes,mean_ms,speedup,normalized"));
        assert_eq!(read_csv(csv.as_bytes()).unwrap().len(), 4);
        assert!(bench_svg(&json, 2).unwrap().contains(r#"id="ideal""#));
        assert!(bench_csv(&json, 3).is_err());
    }
}
