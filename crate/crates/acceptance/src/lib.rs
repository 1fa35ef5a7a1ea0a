//! Acceptance checks for the workspace.
//!
//! The checks live in `tests/acceptance.rs` and print one `PASS` or `FAIL`
//! line each:
//!
//! ```text
//! cargo test -p mailseal-acceptance --test acceptance
//! ```

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Collects verdicts and prints them as they arrive.
#[derive(Default)]
pub struct Verdicts {
    results: Vec<(String, bool)>,
}

impl Verdicts {
    /// Runs `check` and records a failure if it returns `Err`, panics or
    /// exceeds `budget`. `Ok` carries a short measurement summary.
    pub fn check(&mut self, name: &str, budget: Duration, check: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let timing = format!("{:.2} s, budget {} s", elapsed.as_secs_f64(), budget.as_secs());
        let (passed, detail) = match outcome {
            Ok(detail) if elapsed <= budget => (true, detail),
            Ok(detail) => (false, format!("{detail}; over time budget")),
            Err(detail) => (false, detail),
        };
        println!("{} {name}: {detail} ({timing})", if passed { "PASS" } else { "FAIL" });
        self.results.push((name.to_owned(), passed));
    }

    pub fn failed(&self) -> Vec<&str> {
        self.results.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
    }
}

/// Fails with `msg` unless `cond` holds.
pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_errors_panics_and_overruns() {
        let mut v = Verdicts::default();
        v.check("ok", Duration::from_secs(5), || Ok("fine".into()));
        v.check("err", Duration::from_secs(5), || Err("no".into()));
        v.check("panic", Duration::from_secs(5), || panic!("boom"));
        v.check("slow", Duration::ZERO, || {
            std::thread::sleep(Duration::from_millis(5));
            Ok(String::new())
        });
        assert_eq!(v.failed(), ["err", "panic", "slow"]);
    }
}
