mod support;

use mailseal_core::AssociatedData;
use mailseal_efail::{plan_exhaustive, run_suite, Mutation, MutationKind, Opener, Summary};
use support::cbc::{cbc_seal, CbcOpener};

#[test]
fn cbc_round_trips() {
    let opener = CbcOpener { key: [9; 16] };
    let plaintext: Vec<u8> = (0..64).collect();
    let env = cbc_seal(&opener.key, [4; 12], &plaintext, vec![]);
    assert_eq!(opener.open(&env).unwrap(), plaintext);
}

#[test]
fn unauthenticated_cbc_accepts_splices() {
    let opener = CbcOpener { key: [9; 16] };
    let plaintext = b"Dear Bob, the meeting moved to 3pm. Bring the contract. -- Alice".to_vec();
    assert_eq!(plaintext.len(), 64);
    let env = cbc_seal(&opener.key, [4; 12], &plaintext, AssociatedData::body("m", "alice").to_canonical_bytes());

    let plan = plan_exhaustive(&env, &MutationKind::ATTACKS, Some(b"other-ad"));
    let reports = run_suite(&env, &opener, plan).unwrap();
    let summary = Summary::from_reports(&reports);
    assert_eq!(summary.exit_code(), 1);
    let splices = &summary.by_kind[&MutationKind::BlockSplice];
    assert!(splices.accepted >= 1);
    assert!(summary.by_kind[&MutationKind::BitFlip].accepted > 0);

    // The CBC gadget: swapping blocks 2 and 3 leaves block 0 intact and
    // still hands the attacker 64 bytes of partly controlled plaintext.
    let r = reports.iter().find(|r| r.mutation == Mutation::BlockSplice { first: 2, second: 3 }).unwrap();
    assert!(!r.rejected);
    assert_eq!(r.leaked_bytes, 64);
}
