//! How estimators fan out over random streams.
//!
//! Estimators split their budget over `streams` independent RNG streams and
//! reduce the per-stream partials in stream-id order. An [`Executor`] only
//! decides where each stream runs, so results depend on `(seed, streams)` and
//! never on scheduling.

use alloc::vec::Vec;

pub trait Executor {
    /// Evaluates `job(i)` for `i in 0..streams` and returns the results in
    /// index order.
    fn map_streams<T, F>(&self, streams: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every stream on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_streams<T, F>(&self, streams: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..streams).map(job).collect()
    }
}

/// Splits `total` work items over `streams` as evenly as possible.
pub fn split_budget(total: u64, streams: usize, index: usize) -> u64 {
    let streams = streams.max(1) as u64;
    let base = total / streams;
    let extra = total % streams;
    base + u64::from((index as u64) < extra)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_split_sums_to_total() {
        for total in [0u64, 1, 7, 1000, 1001] {
            for streams in 1..9 {
                let s: u64 = (0..streams).map(|i| split_budget(total, streams, i)).sum();
                assert_eq!(s, total);
            }
        }
    }
}
