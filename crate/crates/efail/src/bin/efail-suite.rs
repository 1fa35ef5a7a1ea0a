use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;
use mailseal_core::{encrypt_message, generate_key, Attachment, SecureMessage};
use mailseal_efail::{plan_exhaustive, plan_sampled, run_suite, AeadOpener, MutationKind, Summary};
use serde_json::json;

/// Seal a message file and try every requested ciphertext manipulation on it.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// File whose contents become the message body.
    #[arg(long)]
    message: PathBuf,
    /// `all` or a comma-separated list of mutation kinds.
    #[arg(long, default_value = "all")]
    strategies: String,
    /// JSON report destination.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Envelopes up to this many ciphertext bytes are attacked exhaustively.
    #[arg(long, default_value_t = 64)]
    exhaustive_limit: usize,
    /// Number of random mutations for larger envelopes.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn parse_kinds(list: &str) -> anyhow::Result<Vec<MutationKind>> {
    if list == "all" {
        return Ok(MutationKind::ATTACKS.to_vec());
    }
    let kinds = list.split(',').map(|s| s.trim().parse::<MutationKind>()).collect::<Result<Vec<_>, _>>();
    match kinds {
        Ok(k) if !k.is_empty() => Ok(k),
        Ok(_) => bail!("no strategies given"),
        Err(e) => bail!(e),
    }
}

fn main() -> anyhow::Result<ExitCode> {
    let args = Args::parse();
    let kinds = parse_kinds(&args.strategies)?;
    let data = std::fs::read(&args.message).with_context(|| format!("reading {}", args.message.display()))?;

    // Seal the file as a body plus one attachment so that ad_swap has a
    // sibling part of the same message to borrow from.
    let msg = SecureMessage {
        subject: String::new(),
        body: String::new(),
        attachments: vec![
            Attachment { filename: String::new(), data },
            Attachment { filename: "sibling".into(), data: vec![0; 16] },
        ],
    };
    let key = generate_key()?;
    let enc = encrypt_message(&msg, &key, "efail-suite", "harness")?;
    let target = &enc.attachment_envelopes[0];
    let donor = Some(enc.attachment_envelopes[1].ad.as_slice());

    let plan = if target.ciphertext.len() <= args.exhaustive_limit {
        plan_exhaustive(target, &kinds, donor)
    } else {
        plan_sampled(target, &kinds, donor, args.samples, args.seed)
    };
    let reports = run_suite(target, &AeadOpener::new(&key), plan)?;
    if reports.is_empty() {
        bail!("no mutations applied");
    }
    let summary = Summary::from_reports(&reports);
    print!("{}", summary.to_text());

    if let Some(out) = &args.out {
        let doc = json!({ "summary": summary, "reports": reports });
        std::fs::write(out, serde_json::to_vec_pretty(&doc)?).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(ExitCode::from(summary.exit_code() as u8))
}
