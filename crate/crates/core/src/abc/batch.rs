//! Ordered, parallel evaluation of indexed proposals.
//!
//! Proposals are evaluated in batches whose size depends only on previously
//! observed counts. Each proposal draws from its own RNG stream and outcomes
//! are consumed in index order, so results do not depend on the thread count.

use rayon::prelude::*;

pub(crate) fn next_batch_size(
    needed: usize,
    accepted: u64,
    proposed: u64,
    remaining: Option<u64>,
) -> usize {
    let rate = if proposed == 0 {
        0.5
    } else {
        (accepted as f64 / proposed as f64).max(1e-3)
    };
    let want = ((needed as f64 / rate) * 1.1).ceil() as usize;
    let mut size = want.clamp(16, 8192);
    if let Some(r) = remaining {
        size = size.min(r as usize);
    }
    size
}

pub(crate) fn evaluate<T: Send>(start: u64, count: usize, f: impl Fn(u64) -> T + Sync) -> Vec<T> {
    (start..start + count as u64)
        .into_par_iter()
        .map(&f)
        .collect()
}
