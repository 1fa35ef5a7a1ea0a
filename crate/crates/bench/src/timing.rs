use mailseal_core::{generate_key, open, seal, AssociatedData, KernelError};
use thiserror::Error;

use crate::{BenchSample, Impl, Op};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0} is not available in this environment")]
    ImplUnavailable(Impl),
    #[error("decrypted output differs from the payload")]
    CorrectnessGuard,
    #[error("clock reported a non-positive duration ({0} ms)")]
    NonPositiveDuration(f64),
    #[error("samples do not cover every size with the configured repetitions, or lack the 1 MiB cell")]
    IncompleteGrid,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A monotonic millisecond clock.
pub trait Clock {
    fn now_ms(&self) -> f64;
}

#[cfg(not(target_arch = "wasm32"))]
pub struct MonotonicClock {
    origin: std::time::Instant,
}

#[cfg(not(target_arch = "wasm32"))]
impl Default for MonotonicClock {
    fn default() -> Self {
        Self { origin: std::time::Instant::now() }
    }
}

#[cfg(not(target_arch = "wasm32"))]
impl Clock for MonotonicClock {
    fn now_ms(&self) -> f64 {
        self.origin.elapsed().as_secs_f64() * 1e3
    }
}

/// Times the Rust kernel, tagging samples with `implementation`.
///
/// Key generation, the decrypt input and the correctness check happen
/// outside the timed region. One untimed warm-up precedes the repetitions.
pub fn time_kernel(
    implementation: Impl,
    op: Op,
    payload: &[u8],
    repetitions: usize,
    clock: &dyn Clock,
) -> Result<Vec<BenchSample>, BenchError> {
    if implementation == Impl::ScriptBaseline {
        return Err(BenchError::ImplUnavailable(implementation));
    }
    let key = generate_key()?;
    let ad = AssociatedData::attachment("bench", "bench", 0);
    let sealed = seal(payload, &key, &ad)?;

    let mut samples = Vec::with_capacity(repetitions);
    for repetition in 0..=repetitions {
        let duration_ms = match op {
            Op::Encrypt => {
                let start = clock.now_ms();
                let env = seal(payload, &key, &ad)?;
                let elapsed = clock.now_ms() - start;
                std::hint::black_box(&env);
                elapsed
            }
            Op::Decrypt => {
                let start = clock.now_ms();
                let plaintext = open(&sealed, &key)?;
                let elapsed = clock.now_ms() - start;
                if plaintext != payload {
                    return Err(BenchError::CorrectnessGuard);
                }
                elapsed
            }
        };
        if repetition == 0 {
            continue;
        }
        if duration_ms <= 0.0 {
            return Err(BenchError::NonPositiveDuration(duration_ms));
        }
        samples.push(BenchSample { implementation, op, size_bytes: payload.len(), duration_ms, repetition });
    }
    Ok(samples)
}

/// Native entry point: only `kernel_native` can run outside a browser.
#[cfg(not(target_arch = "wasm32"))]
pub fn time_op(implementation: Impl, op: Op, payload: &[u8], repetitions: usize) -> Result<Vec<BenchSample>, BenchError> {
    if implementation != Impl::KernelNative {
        return Err(BenchError::ImplUnavailable(implementation));
    }
    time_kernel(implementation, op, payload, repetitions, &MonotonicClock::default())
}

#[cfg(test)]
mod tests {
    use std::cell::Cell;

    use super::*;
    use crate::gen_payload;

    #[test]
    fn ten_repetitions_ten_samples() {
        let payload = gen_payload(64 * 1024, 3);
        for op in [Op::Encrypt, Op::Decrypt] {
            let samples = time_op(Impl::KernelNative, op, &payload, 10).unwrap();
            assert_eq!(samples.len(), 10);
            assert!(samples.iter().all(|s| s.duration_ms > 0.0 && s.size_bytes == payload.len()));
            assert_eq!(samples.iter().map(|s| s.repetition).collect::<Vec<_>>(), (1..=10).collect::<Vec<_>>());
        }
    }

    #[test]
    fn browser_only_impls_are_unavailable() {
        let payload = gen_payload(16, 1);
        assert!(matches!(time_op(Impl::ScriptBaseline, Op::Encrypt, &payload, 1), Err(BenchError::ImplUnavailable(_))));
        assert!(matches!(time_op(Impl::KernelPortable, Op::Encrypt, &payload, 1), Err(BenchError::ImplUnavailable(_))));
    }

    struct Frozen;
    impl Clock for Frozen {
        fn now_ms(&self) -> f64 {
            5.0
        }
    }

    #[test]
    fn frozen_clock_is_reported() {
        let payload = gen_payload(16, 1);
        assert!(matches!(
            time_kernel(Impl::KernelPortable, Op::Encrypt, &payload, 2, &Frozen),
            Err(BenchError::NonPositiveDuration(_))
        ));
    }

    struct Ticking(Cell<f64>);
    impl Clock for Ticking {
        fn now_ms(&self) -> f64 {
            self.0.set(self.0.get() + 1.5);
            self.0.get()
        }
    }

    #[test]
    fn custom_clock_drives_durations() {
        let payload = gen_payload(1024, 1);
        let samples = time_kernel(Impl::KernelPortable, Op::Decrypt, &payload, 4, &Ticking(Cell::new(0.0))).unwrap();
        assert!(samples.iter().all(|s| s.duration_ms == 1.5 && s.implementation == Impl::KernelPortable));
    }
}
