//! Replicate-level parallelism with deterministic, ordered results.

use rayon::prelude::*;

/// Evaluates `f(0), …, f(count − 1)` on a pool of `workers` threads and
/// returns the results in replicate order. Each replicate must derive its
/// randomness from its index alone, which makes the output independent of
/// `workers`.
pub fn run_replicates<T, F>(workers: usize, count: u64, f: F) -> Result<Vec<T>, rayon::ThreadPoolBuildError>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    Ok(pool.install(|| (0..count).into_par_iter().map(&f).collect()))
}

/// Like [`run_replicates`] for fallible replicates; the first error in
/// replicate order wins.
pub fn try_run_replicates<T, E, F>(workers: usize, count: u64, f: F) -> Result<Result<Vec<T>, E>, rayon::ThreadPoolBuildError>
where
    T: Send,
    E: Send,
    F: Fn(u64) -> Result<T, E> + Sync + Send,
{
    Ok(run_replicates(workers, count, f)?.into_iter().collect())
}
