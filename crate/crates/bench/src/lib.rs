//! Encryption micro-benchmark.
//!
//! Payloads of 1 to 20 MiB come from a seeded PRNG, each (implementation,
//! operation, size) cell runs one untimed warm-up and then a fixed number of
//! timed repetitions, and the analysis reports per-cell means, speedups over
//! the script baseline, curves normalized to the 1 MiB time and a
//! least-squares linear fit.

mod analysis;
mod emit;
mod payload;
mod sample;
mod timing;

pub use analysis::{analyze, linear_fit, BenchReport, Cell, LinearFit, ReferenceFigures, CV_FLAG_THRESHOLD, REFERENCE};
pub use emit::{read_csv, render_svg, write_csv, CsvRow};
pub use payload::gen_payload;
pub use sample::{BenchSample, Impl, Op, DEFAULT_SIZES_MIB, MIB};
pub use timing::{time_kernel, BenchError, Clock};

#[cfg(not(target_arch = "wasm32"))]
pub use timing::{time_op, MonotonicClock};
