//! Per-thread call counters used to audit independence of evaluation paths.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    BorelLaplace,
    EasSeries,
    Oracle,
}

thread_local! {
    static COUNTS: [Cell<u64>; 3] = const { [Cell::new(0), Cell::new(0), Cell::new(0)] };
}

fn slot(kind: Kind) -> usize {
    match kind {
        Kind::BorelLaplace => 0,
        Kind::EasSeries => 1,
        Kind::Oracle => 2,
    }
}

pub fn record(kind: Kind) {
    COUNTS.with(|c| c[slot(kind)].set(c[slot(kind)].get() + 1));
}

/// Snapshot `(borel, eas, oracle)` for the current thread.
pub fn snapshot() -> [u64; 3] {
    COUNTS.with(|c| [c[0].get(), c[1].get(), c[2].get()])
}

/// Counts recorded on this thread while running `f`.
pub fn count_during<T>(f: impl FnOnce() -> T) -> (T, [u64; 3]) {
    let before = snapshot();
    let out = f();
    let after = snapshot();
    (out, [after[0] - before[0], after[1] - before[1], after[2] - before[2]])
}
