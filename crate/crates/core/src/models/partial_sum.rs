//! The normalized partial-sum process `S_n(t) = a_n^{-1} Σ_{k ≤ [nt]} (z_k − E[z])`.
//!
//! All three entry points draw `z_1, …, z_n` in order from the given stream, so
//! the same stream state yields the same underlying sample in each.

use alloc::vec::Vec;

use crate::cadlag::{Interval, PathEnsemble, StepFunction, VectorStepFunction};
use crate::error::{domain, Result};
use crate::rng::Stream;
use crate::tail::TailModel;

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(domain("sample size n must be >= 1"))
    } else {
        Ok(())
    }
}

/// One path of `S_n` on `[0, 1]`, with jumps at `k / n`.
pub fn partial_sum_process(rng: &mut Stream, n: usize, tail: &TailModel) -> Result<StepFunction> {
    check_n(n)?;
    let a_n = tail.a_n(n as u64)?;
    let mean = tail.mean();
    let mut times = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut running = 0.0;
    for k in 1..=n {
        running += tail.sample(rng) - mean;
        times.push(k as f64 / n as f64);
        values.push(running / a_n);
    }
    StepFunction::new(Interval::unit(), times, values)
}

/// The row `X_k = z_k 1_{[k/n, 1]}`, `k = 1, …, n`, of the triangular array
/// whose centred normalized sum is `S_n`. `‖X_k‖ = z_k`.
pub fn partial_sum_array(rng: &mut Stream, n: usize, tail: &TailModel, seed: u64) -> Result<PathEnsemble> {
    check_n(n)?;
    let paths = (1..=n)
        .map(|k| {
            let z = tail.sample(rng);
            VectorStepFunction::scalar(StepFunction::indicator(Interval::unit(), k as f64 / n as f64, z))
        })
        .collect();
    Ok(PathEnsemble::new(paths, seed, "partial_sum")?
        .with_param("n", alloc::format!("{n}"))
        .with_param("alpha", alloc::format!("{}", tail.alpha())))
}

/// Value at `t = 1` and sup norm of the small-jump part `S_n^{<ε}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedStat {
    pub value_at_one: f64,
    pub sup_norm: f64,
}

/// Streams one sample of `z_1, …, z_n` and returns, for every `ε`, the value
/// at 1 and the sup norm of
/// `a_n^{-1} Σ_{k ≤ [nt]} (z_k 1{z_k ≤ a_n ε} − E[z 1{z ≤ a_n ε}])`.
///
/// Equivalent to [`super::truncated_sum`] on [`partial_sum_array`] with the
/// analytic centering, without materializing paths.
pub fn partial_sum_truncated_stats(
    rng: &mut Stream,
    n: usize,
    tail: &TailModel,
    epsilons: &[f64],
) -> Result<Vec<TruncatedStat>> {
    check_n(n)?;
    if epsilons.iter().any(|&e| !(e > 0.0)) {
        return Err(domain("truncation levels must be positive"));
    }
    let a_n = tail.a_n(n as u64)?;
    let cutoffs: Vec<f64> = epsilons.iter().map(|e| a_n * e).collect();
    let centers = cutoffs
        .iter()
        .map(|&c| tail.truncated_moment(1, c))
        .collect::<Result<Vec<_>>>()?;
    let mut sums = alloc::vec![0.0f64; epsilons.len()];
    let mut sups = alloc::vec![0.0f64; epsilons.len()];
    for _ in 0..n {
        let z = tail.sample(rng);
        for j in 0..sums.len() {
            let kept = if z <= cutoffs[j] { z } else { 0.0 };
            sums[j] += kept - centers[j];
            sups[j] = sups[j].max(sums[j].abs());
        }
    }
    Ok(sums
        .iter()
        .zip(&sups)
        .map(|(s, m)| TruncatedStat {
            value_at_one: s / a_n,
            sup_norm: m / a_n,
        })
        .collect())
}
