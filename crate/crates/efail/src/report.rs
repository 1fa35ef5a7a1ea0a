use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::{Mutation, MutationKind, MutationReport};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindTotals {
    pub total: usize,
    pub rejected: usize,
    pub accepted: usize,
    /// Plaintext bytes released by rejected mutations. Must be zero.
    pub leaked_on_rejection: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub by_kind: BTreeMap<MutationKind, KindTotals>,
    /// Attack mutations the opener accepted.
    pub accepted: Vec<Mutation>,
    pub passed: bool,
}

impl Summary {
    pub fn from_reports(reports: &[MutationReport]) -> Self {
        let mut by_kind: BTreeMap<MutationKind, KindTotals> = BTreeMap::new();
        let mut accepted = Vec::new();
        for r in reports {
            let totals = by_kind.entry(r.mutation.kind()).or_default();
            totals.total += 1;
            if r.rejected {
                totals.rejected += 1;
                totals.leaked_on_rejection += r.leaked_bytes;
            } else {
                totals.accepted += 1;
                if !r.mutation.is_control() {
                    accepted.push(r.mutation.clone());
                }
            }
        }
        let leaks = by_kind.values().map(|t| t.leaked_on_rejection).sum::<usize>();
        Summary { total: reports.len(), passed: accepted.is_empty() && leaks == 0, by_kind, accepted }
    }

    /// 0 when every attack was rejected without leaking, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:<20} {:>8} {:>9} {:>9}", "mutation", "total", "rejected", "accepted").unwrap();
        for (kind, t) in &self.by_kind {
            writeln!(out, "{:<20} {:>8} {:>9} {:>9}", kind.as_str(), t.total, t.rejected, t.accepted).unwrap();
        }
        writeln!(out, "{:<20} {:>8}", "all", self.total).unwrap();
        if self.passed {
            out.push_str("PASS: every manipulated envelope was rejected\n");
        } else {
            writeln!(out, "FAIL: {} manipulated envelopes were accepted", self.accepted.len()).unwrap();
            for m in self.accepted.iter().take(20) {
                writeln!(out, "  accepted: {}", serde_json::to_string(m).unwrap()).unwrap();
            }
        }
        out
    }
}
