use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::{BenchReport, Impl, Op, MIB};

/// One row of the results file. The browser benchmark page writes the same
/// columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    #[serde(rename = "impl")]
    pub implementation: Impl,
    pub op: Op,
    pub size_bytes: usize,
    pub mean_ms: f64,
    pub speedup: Option<f64>,
    pub normalized: f64,
}

impl BenchReport {
    pub fn csv_rows(&self) -> Vec<CsvRow> {
        self.cells
            .iter()
            .map(|c| CsvRow {
                implementation: c.implementation,
                op: c.op,
                size_bytes: c.size_bytes,
                mean_ms: c.mean_ms,
                speedup: c.speedup,
                normalized: c.normalized,
            })
            .collect()
    }
}

pub fn write_csv<W: Write>(report: &BenchReport, out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in report.csv_rows() {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> csv::Result<Vec<CsvRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

fn colour(implementation: Impl, op: Op) -> &'static str {
    match (implementation, op) {
        (Impl::KernelNative, Op::Encrypt) => "#1f77b4",
        (Impl::KernelNative, Op::Decrypt) => "#aec7e8",
        (Impl::KernelPortable, Op::Encrypt) => "#2ca02c",
        (Impl::KernelPortable, Op::Decrypt) => "#98df8a",
        (Impl::ScriptBaseline, Op::Encrypt) => "#d62728",
        (Impl::ScriptBaseline, Op::Decrypt) => "#ff9896",
    }
}

/// Line chart of normalized duration against size in MiB, one polyline per
/// series plus the ideal `y = x` reference.
pub fn render_svg(report: &BenchReport) -> String {
    let max_x = report.sizes.iter().copied().max().unwrap_or(MIB) as f64 / MIB as f64;
    let max_y = report.cells.iter().map(|c| c.normalized).fold(max_x, f64::max);
    let sx = |x: f64| MARGIN + x / max_x * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / max_y * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{MARGIN}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line class="axis" x1="{MARGIN}" y1="{b}" x2="{MARGIN}" y2="{MARGIN}" stroke="black"/>"#,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN,
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">size (MiB)</text><text x="12" y="{}" transform="rotate(-90 12 {})" text-anchor="middle">normalized time</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
    );
    let _ = writeln!(
        svg,
        r##"<line id="ideal" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888" stroke-dasharray="6 4"/>"##,
        sx(0.0),
        sy(0.0),
        sx(max_x),
        sy(max_x),
    );
    for &(implementation, op) in report.fits.keys() {
        let points: Vec<String> = report
            .series(implementation, op)
            .map(|c| format!("{:.2},{:.2}", sx(c.size_bytes as f64 / MIB as f64), sy(c.normalized)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="measured" data-series="{implementation}/{op}" fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            colour(implementation, op),
            points.join(" "),
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{analyze, BenchSample, DEFAULT_SIZES_MIB};

    fn report() -> BenchReport {
        let mut samples = Vec::new();
        for (implementation, factor) in [(Impl::KernelPortable, 1.0), (Impl::ScriptBaseline, 9.0)] {
            for op in [Op::Encrypt, Op::Decrypt] {
                for mib in DEFAULT_SIZES_MIB {
                    for repetition in 1..=3 {
                        samples.push(BenchSample {
                            implementation,
                            op,
                            size_bytes: mib * MIB,
                            duration_ms: factor * (mib as f64 * 2.5 + 0.1 * repetition as f64),
                            repetition,
                        });
                    }
                }
            }
        }
        analyze(&samples, 3).unwrap()
    }

    #[test]
    fn csv_has_one_row_per_cell() {
        let report = report();
        let mut buf = Vec::new();
        write_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("impl,op,size_bytes,mean_ms,speedup,normalized\n"));
        assert_eq!(text.lines().count(), 1 + 2 * 2 * DEFAULT_SIZES_MIB.len());
    }

    #[test]
    fn csv_round_trips() {
        let report = report();
        let mut buf = Vec::new();
        write_csv(&report, &mut buf).unwrap();
        let rows = read_csv(buf.as_slice()).unwrap();
        assert_eq!(rows, report.csv_rows());
        assert!(rows.iter().filter(|r| r.implementation == Impl::ScriptBaseline).all(|r| r.speedup.is_none()));
        assert!(rows.iter().filter(|r| r.implementation == Impl::KernelPortable).all(|r| r.speedup.is_some()));
    }

    #[test]
    fn svg_has_ideal_line_and_measured_series() {
        let svg = render_svg(&report());
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches(r#"id="ideal""#).count(), 1);
        assert_eq!(svg.matches(r#"class="measured""#).count(), 4);
        let line = svg.lines().find(|l| l.contains(r#"data-series="kernel_portable/encrypt""#)).unwrap();
        let points = line.split(r#"points=""#).nth(1).unwrap();
        assert_eq!(points.split_whitespace().count(), DEFAULT_SIZES_MIB.len());
    }
}
