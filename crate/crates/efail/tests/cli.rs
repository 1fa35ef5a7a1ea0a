use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_efail-suite")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn small_message_exhaustive_run_passes() {
    let dir = tempfile::tempdir().unwrap();
    let message = dir.path().join("msg.txt");
    std::fs::write(&message, vec![b'a'; 40]).unwrap();
    let report = dir.path().join("report.json");
    let (code, stdout) = run(&["--message", message.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("PASS"));

    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(doc["summary"]["total"].as_u64().unwrap() as usize, reports.len());
    assert!(doc["summary"]["passed"].as_bool().unwrap());
}

#[test]
fn sampled_run_with_selected_strategies() {
    let dir = tempfile::tempdir().unwrap();
    let message = dir.path().join("msg.bin");
    std::fs::write(&message, vec![0u8; 4096]).unwrap();
    let (code, stdout) = run(&["--message", message.to_str().unwrap(), "--strategies", "bit_flip,block_splice", "--samples", "200"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("bit_flip"));
    assert!(!stdout.contains("truncate"));
}

#[test]
fn unknown_strategy_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let message = dir.path().join("msg.bin");
    std::fs::write(&message, b"x").unwrap();
    let (code, _) = run(&["--message", message.to_str().unwrap(), "--strategies", "oracle_padding"]);
    assert_ne!(code, 0);
}
