use std::fs::File;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Parser;
use mailseal_bench::{analyze, gen_payload, render_svg, time_op, write_csv, Impl, Op, CV_FLAG_THRESHOLD, MIB, REFERENCE};

/// Time encryption and decryption over a grid of payload sizes.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Payload sizes in MiB. Must include 1.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,12,16,20")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long = "impl", value_delimiter = ',', default_value = "kernel_native")]
    implementations: Vec<Impl>,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    if !args.sizes.contains(&1) {
        bail!("--sizes must include 1 (the normalization baseline)");
    }
    if args.reps == 0 {
        bail!("--reps must be positive");
    }

    let mut samples = Vec::new();
    for &implementation in &args.implementations {
        for &mib in &args.sizes {
            let payload = gen_payload(mib * MIB, args.seed);
            for op in [Op::Encrypt, Op::Decrypt] {
                let cell = time_op(implementation, op, &payload, args.reps)
                    .with_context(|| format!("{implementation} {op} {mib} MiB"))?;
                samples.extend(cell);
            }
            eprintln!("{implementation}: {mib} MiB done");
        }
    }

    let report = analyze(&samples, args.reps)?;
    let file = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_csv(&report, file)?;
    if let Some(path) = &args.svg {
        std::fs::write(path, render_svg(&report)).with_context(|| format!("writing {}", path.display()))?;
    }

    println!("{:<16} {:<8} {:>8} {:>10} {:>8} {:>10}", "impl", "op", "MiB", "mean_ms", "cv", "normalized");
    for c in &report.cells {
        println!(
            "{:<16} {:<8} {:>8} {:>10.3} {:>7.1}% {:>10.2}{}",
            c.implementation.as_str(),
            c.op.as_str(),
            c.size_bytes / MIB,
            c.mean_ms,
            c.cv * 100.0,
            c.normalized,
            if c.unstable { format!("  unstable (cv > {:.0}%)", CV_FLAG_THRESHOLD * 100.0) } else { String::new() },
        );
    }
    let largest = *report.sizes.last().expect("non-empty grid");
    for (&(implementation, op), fit) in &report.fits {
        let top = report.cell(implementation, op, largest).expect("complete grid");
        println!(
            "{implementation} {op}: R^2 {:.4}, slope {:.3} ms/MiB, normalized({} MiB) {:.2}",
            fit.r_squared,
            fit.slope,
            largest / MIB,
            top.normalized,
        );
    }
    println!(
        "reference (mobile browsers, not comparable): encrypt speedup {}x / {}x, decrypt {}x; 20 MiB wasm {} / {} ms, script {} / {} ms",
        REFERENCE.iphone_encrypt_speedup,
        REFERENCE.pixel_encrypt_speedup,
        REFERENCE.decrypt_speedup,
        REFERENCE.iphone_wasm_20mib_ms,
        REFERENCE.pixel_wasm_20mib_ms,
        REFERENCE.iphone_js_20mib_ms,
        REFERENCE.pixel_js_20mib_ms,
    );
    Ok(())
}
