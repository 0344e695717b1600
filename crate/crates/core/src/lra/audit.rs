//! Opt-in, per-thread re-verification of every feasibility answer.

use std::cell::Cell;

use super::certificate::witness_satisfies;
use super::{Constraint, FeasibilityResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AuditCounts {
    pub sat_verified: u64,
    pub unsat_verified: u64,
    pub failures: u64,
}

thread_local! {
    static ENABLED: Cell<bool> = const { Cell::new(false) };
    static COUNTS: Cell<AuditCounts> = const { Cell::new(AuditCounts { sat_verified: 0, unsat_verified: 0, failures: 0 }) };
}

/// Enables or disables auditing on the current thread and resets the counters.
pub fn set_audit(enabled: bool) {
    ENABLED.with(|e| e.set(enabled));
    COUNTS.with(|c| c.set(AuditCounts::default()));
}

pub fn audit_counts() -> AuditCounts {
    COUNTS.with(Cell::get)
}

fn verify(constraints: &[Constraint], result: &FeasibilityResult) -> bool {
    match result {
        FeasibilityResult::Sat(w) => witness_satisfies(constraints, w),
        FeasibilityResult::Unsat(cert) => cert.verify(constraints),
    }
}

pub(super) fn record(constraints: &[Constraint], result: &FeasibilityResult) {
    let enabled = ENABLED.with(Cell::get);
    if !enabled && !cfg!(debug_assertions) {
        return;
    }
    let ok = verify(constraints, result);
    debug_assert!(ok, "feasibility answer failed verification: {constraints:?} -> {result:?}");
    if enabled {
        COUNTS.with(|c| {
            let mut n = c.get();
            match (ok, result.is_sat()) {
                (false, _) => n.failures += 1,
                (true, true) => n.sat_verified += 1,
                (true, false) => n.unsat_verified += 1,
            }
            c.set(n);
        });
    }
}
