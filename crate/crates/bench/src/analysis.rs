use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::{BenchError, BenchSample, Impl, Op, MIB};

/// Cells whose repetitions vary more than this (coefficient of variation)
/// are flagged as unstable.
pub const CV_FLAG_THRESHOLD: f64 = 0.25;

/// Published mobile-device measurements, shown next to local results for
/// orientation only. They are never used as thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceFigures {
    pub iphone_encrypt_speedup: f64,
    pub pixel_encrypt_speedup: f64,
    pub decrypt_speedup: f64,
    pub iphone_wasm_20mib_ms: f64,
    pub pixel_wasm_20mib_ms: f64,
    pub iphone_js_20mib_ms: f64,
    pub pixel_js_20mib_ms: f64,
    pub device_ratio_wasm: f64,
    pub device_ratio_js: f64,
}

pub const REFERENCE: ReferenceFigures = ReferenceFigures {
    iphone_encrypt_speedup: 13.9,
    pixel_encrypt_speedup: 6.9,
    decrypt_speedup: 5.1,
    iphone_wasm_20mib_ms: 307.2,
    pixel_wasm_20mib_ms: 786.9,
    iphone_js_20mib_ms: 4305.6,
    pixel_js_20mib_ms: 5700.4,
    device_ratio_wasm: 2.6,
    device_ratio_js: 1.3,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    #[serde(rename = "impl")]
    pub implementation: Impl,
    pub op: Op,
    pub size_bytes: usize,
    pub mean_ms: f64,
    /// Coefficient of variation of the repetitions.
    pub cv: f64,
    pub unstable: bool,
    /// script_baseline mean / this mean, when a baseline was measured.
    pub speedup: Option<f64>,
    /// mean / mean at 1 MiB for the same implementation and operation.
    pub normalized: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub repetitions: usize,
    pub sizes: Vec<usize>,
    pub cells: Vec<Cell>,
    /// Least-squares fit of mean_ms against size in MiB.
    pub fits: BTreeMap<(Impl, Op), LinearFit>,
    pub reference: ReferenceFigures,
}

impl BenchReport {
    pub fn cell(&self, implementation: Impl, op: Op, size_bytes: usize) -> Option<&Cell> {
        self.cells.iter().find(|c| c.implementation == implementation && c.op == op && c.size_bytes == size_bytes)
    }

    pub fn series(&self, implementation: Impl, op: Op) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.implementation == implementation && c.op == op)
    }
}

/// Ordinary least squares over `(x, y)` points.
pub fn linear_fit(points: &[(f64, f64)]) -> LinearFit {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = points.iter().map(|p| (p.1 - (intercept + slope * p.0)).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 {
        if ss_res == 0.0 { 1.0 } else { 0.0 }
    } else {
        1.0 - ss_res / ss_tot
    };
    LinearFit { slope, intercept, r_squared }
}

fn mean_and_cv(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt() / mean)
}

/// Aggregates samples into a report.
///
/// Every implementation/operation pair present must have exactly
/// `repetitions` samples at every size that appears anywhere in the input,
/// and the grid must include 1 MiB.
pub fn analyze(samples: &[BenchSample], repetitions: usize) -> Result<BenchReport, BenchError> {
    let mut groups: BTreeMap<(Impl, Op, usize), Vec<f64>> = BTreeMap::new();
    for s in samples {
        groups.entry((s.implementation, s.op, s.size_bytes)).or_default().push(s.duration_ms);
    }
    let sizes: Vec<usize> = samples.iter().map(|s| s.size_bytes).collect::<BTreeSet<_>>().into_iter().collect();
    let series: BTreeSet<(Impl, Op)> = samples.iter().map(|s| (s.implementation, s.op)).collect();
    if series.is_empty() || repetitions == 0 || !sizes.contains(&MIB) {
        return Err(BenchError::IncompleteGrid);
    }
    for &(i, o) in &series {
        for &size in &sizes {
            if groups.get(&(i, o, size)).map_or(0, Vec::len) != repetitions {
                return Err(BenchError::IncompleteGrid);
            }
        }
    }

    let means: BTreeMap<(Impl, Op, usize), (f64, f64)> =
        groups.iter().map(|(k, v)| (*k, mean_and_cv(v))).collect();
    let mut cells = Vec::new();
    let mut fits = BTreeMap::new();
    for &(i, o) in &series {
        let base = means[&(i, o, MIB)].0;
        let mut points = Vec::with_capacity(sizes.len());
        for &size in &sizes {
            let (mean_ms, cv) = means[&(i, o, size)];
            let speedup = match i {
                Impl::ScriptBaseline => None,
                _ => means.get(&(Impl::ScriptBaseline, o, size)).map(|(script, _)| script / mean_ms),
            };
            cells.push(Cell {
                implementation: i,
                op: o,
                size_bytes: size,
                mean_ms,
                cv,
                unstable: cv > CV_FLAG_THRESHOLD,
                speedup,
                normalized: mean_ms / base,
            });
            points.push((size as f64 / MIB as f64, mean_ms));
        }
        fits.insert((i, o), linear_fit(&points));
    }
    Ok(BenchReport { repetitions, sizes, cells, fits, reference: REFERENCE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_SIZES_MIB;

    fn synthetic(implementation: Impl, op: Op, f: impl Fn(usize, usize) -> f64) -> Vec<BenchSample> {
        let mut out = Vec::new();
        for mib in DEFAULT_SIZES_MIB {
            for repetition in 1..=10 {
                out.push(BenchSample {
                    implementation,
                    op,
                    size_bytes: mib * MIB,
                    duration_ms: f(mib * MIB, repetition),
                    repetition,
                });
            }
        }
        out
    }

    #[test]
    fn proportional_durations_fit_perfectly() {
        let samples = synthetic(Impl::KernelNative, Op::Encrypt, |size, _| 3.0 * size as f64);
        let report = analyze(&samples, 10).unwrap();
        let fit = report.fits[&(Impl::KernelNative, Op::Encrypt)];
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!((fit.slope - 3.0 * MIB as f64).abs() / (3.0 * MIB as f64) < 1e-12);
        assert!(fit.intercept.abs() < 1e-3);
        let at_20 = report.cell(Impl::KernelNative, Op::Encrypt, 20 * MIB).unwrap();
        assert!((at_20.normalized - 20.0).abs() < 1e-12);
        assert_eq!(report.cell(Impl::KernelNative, Op::Encrypt, MIB).unwrap().normalized, 1.0);
    }

    #[test]
    fn means_use_every_repetition() {
        // Repetition r takes r ms: the mean over 1..=10 is 5.5.
        let samples = synthetic(Impl::KernelNative, Op::Decrypt, |_, r| r as f64);
        let report = analyze(&samples, 10).unwrap();
        assert!(report.cells.iter().all(|c| (c.mean_ms - 5.5).abs() < 1e-12));
        // sd of 1..=10 is 3.0277, cv 0.55 > 0.25
        assert!(report.cells.iter().all(|c| c.unstable));
    }

    #[test]
    fn speedup_is_script_over_kernel() {
        let mut samples = synthetic(Impl::KernelPortable, Op::Encrypt, |size, _| size as f64 / MIB as f64);
        samples.extend(synthetic(Impl::ScriptBaseline, Op::Encrypt, |size, _| 13.9 * size as f64 / MIB as f64));
        let report = analyze(&samples, 10).unwrap();
        for c in report.series(Impl::KernelPortable, Op::Encrypt) {
            assert!((c.speedup.unwrap() - 13.9).abs() < 1e-9);
        }
        assert!(report.series(Impl::ScriptBaseline, Op::Encrypt).all(|c| c.speedup.is_none()));
    }

    #[test]
    fn missing_cells_are_rejected() {
        let mut samples = synthetic(Impl::KernelNative, Op::Encrypt, |s, _| s as f64);
        samples.pop();
        assert!(matches!(analyze(&samples, 10), Err(BenchError::IncompleteGrid)));

        let samples = synthetic(Impl::KernelNative, Op::Encrypt, |s, _| s as f64);
        assert!(matches!(analyze(&samples, 9), Err(BenchError::IncompleteGrid)));

        let no_base: Vec<_> = samples.iter().copied().filter(|s| s.size_bytes != MIB).collect();
        assert!(matches!(analyze(&no_base, 10), Err(BenchError::IncompleteGrid)));
        assert!(matches!(analyze(&[], 10), Err(BenchError::IncompleteGrid)));
    }

    #[test]
    fn fit_of_noisy_quadratic_is_worse() {
        let points: Vec<(f64, f64)> = DEFAULT_SIZES_MIB.iter().map(|&m| (m as f64, (m * m) as f64)).collect();
        let fit = linear_fit(&points);
        assert!(fit.r_squared < 0.98);
        assert!(fit.r_squared > 0.0);
    }

    #[test]
    fn reference_figures_are_annotations() {
        assert_eq!(REFERENCE.iphone_encrypt_speedup, 13.9);
        assert_eq!(REFERENCE.pixel_encrypt_speedup, 6.9);
        assert_eq!(REFERENCE.decrypt_speedup, 5.1);
        // The quoted device ratios follow from the quoted timings.
        assert!((REFERENCE.pixel_wasm_20mib_ms / REFERENCE.iphone_wasm_20mib_ms - REFERENCE.device_ratio_wasm).abs() < 0.05);
        assert!((REFERENCE.pixel_js_20mib_ms / REFERENCE.iphone_js_20mib_ms - REFERENCE.device_ratio_js).abs() < 0.05);
    }
}
