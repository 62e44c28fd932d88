//! Thread-pool backed executor.

use meandist_core::Executor;
use rayon::prelude::*;
use rayon::ThreadPool;

/// Runs estimator streams on a dedicated Rayon pool. Results come back in
/// stream order, so output depends only on the seed and stream count.
pub struct RayonExecutor {
    pool: ThreadPool,
}

impl RayonExecutor {
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map_streams<T, F>(&self, streams: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..streams).into_par_iter().map(job).collect())
    }
}

/// Thread count from `MEANDIST_THREADS`, then the flag, then the machine.
pub fn resolve_threads(flag: Option<usize>) -> Result<usize, String> {
    if let Ok(v) = std::env::var("MEANDIST_THREADS") {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("MEANDIST_THREADS must be a positive integer, got {v:?}")),
        };
    }
    match flag {
        Some(0) => Err("--threads must be positive".into()),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use meandist_core::meandist::mc_mean_distance;
    use meandist_core::{ConvexBody, Sequential};

    #[test]
    fn pool_matches_sequential_bit_for_bit() {
        let body = ConvexBody::unit_cube(3).unwrap();
        let pool = RayonExecutor::new(4).unwrap();
        let a = mc_mean_distance(&body, 50_000, 9, 7, &pool).unwrap();
        let b = mc_mean_distance(&body, 50_000, 9, 7, &Sequential).unwrap();
        assert_eq!(a, b);
    }
}
