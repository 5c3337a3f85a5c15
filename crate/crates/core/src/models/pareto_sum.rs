//! Sums of i.i.d. generalized Pareto processes `X_i = R_i W_i`.

use alloc::vec::Vec;

use super::PathBuilder;
use crate::cadlag::{PathEnsemble, VectorStepFunction};
use crate::error::{domain, Result};
use crate::rng::Stream;
use crate::spectral::{spectral_mean, MeanFunction, SpectralSampler};
use crate::tail::TailModel;

/// Spectral draws used when a custom sampler's mean must be estimated.
const MEAN_DRAWS: usize = 10_000;

/// `a_n^{-1} Σ_{i ≤ n} (R_i W_i − E[R] E[W])` with its constants precomputed.
#[derive(Debug, Clone)]
pub struct ParetoSumModel {
    spectral: SpectralSampler,
    tail: TailModel,
    n: usize,
    a_n: f64,
    mean: MeanFunction,
    mean_step: VectorStepFunction,
}

impl ParetoSumModel {
    pub fn new(spectral: SpectralSampler, tail: TailModel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("sample size n must be >= 1"));
        }
        let a_n = tail.a_n(n as u64)?;
        let mean = spectral_mean(&spectral, MEAN_DRAWS, 0)?;
        let mean_step = mean.to_step();
        Ok(Self {
            spectral,
            tail,
            n,
            a_n,
            mean,
            mean_step,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a_n(&self) -> f64 {
        self.a_n
    }

    pub fn tail(&self) -> &TailModel {
        &self.tail
    }

    pub fn spectral(&self) -> &SpectralSampler {
        &self.spectral
    }

    /// `E[W]`.
    pub fn spectral_mean(&self) -> &MeanFunction {
        &self.mean
    }

    /// Discretized `E[W]` subtracted pathwise.
    pub fn mean_step(&self) -> &VectorStepFunction {
        &self.mean_step
    }

    /// One path of the centred normalized sum. Draws `R_i` then `W_i` for each `i`.
    pub fn sample(&self, rng: &mut Stream) -> VectorStepFunction {
        let dim = self.spectral.dim();
        let mut b = PathBuilder::with_capacity(self.spectral.interval(), dim, self.n + self.mean_step.breakpoints().len());
        for _ in 0..self.n {
            let r = self.tail.sample(rng);
            match self.spectral.sample_jump_time(rng) {
                Some(u) => {
                    b.add_jump(0, u, r);
                    for c in 1..dim {
                        b.add_constant(c, r);
                    }
                }
                None => b.add_vector(&self.spectral.sample(rng), r),
            }
        }
        b.add_vector(&self.mean_step, -(self.n as f64) * self.tail.mean());
        b.finish(1.0 / self.a_n)
    }

    /// The row `X_i = R_i W_i`, `i = 1, …, n`, drawn in the same order as [`Self::sample`].
    pub fn sample_array(&self, rng: &mut Stream, seed: u64) -> Result<PathEnsemble> {
        let paths: Vec<_> = (0..self.n)
            .map(|_| {
                let r = self.tail.sample(rng);
                self.spectral.sample(rng).scale(r)
            })
            .collect();
        Ok(PathEnsemble::new(paths, seed, "pareto_sum")?
            .with_param("n", alloc::format!("{}", self.n))
            .with_param("alpha", alloc::format!("{}", self.tail.alpha())))
    }
}

/// One path of `a_n^{-1} Σ_{i ≤ n} (R_i W_i − E[R] E[W])`.
pub fn pareto_sum_process(
    rng: &mut Stream,
    n: usize,
    spectral: &SpectralSampler,
    tail: &TailModel,
) -> Result<VectorStepFunction> {
    Ok(ParetoSumModel::new(spectral.clone(), *tail, n)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;

    #[test]
    fn constant_spectral_collapses_to_scalar_sum() {
        let tail = TailModel::pareto(1.5, 1.0).unwrap();
        let n = 1000;
        let s = pareto_sum_process(&mut RngSeed::new(1, 0).stream(), n, &SpectralSampler::constant_one(), &tail).unwrap();
        assert!(s.breakpoints().is_empty());
        let mut rng = RngSeed::new(1, 0).stream();
        let total: f64 = (0..n).map(|_| tail.sample(&mut rng) - tail.mean()).sum();
        let expect = total / tail.a_n(n as u64).unwrap();
        assert!((s.evaluate(0.3).unwrap()[0] - expect).abs() < 1e-9);
    }

    #[test]
    fn indicator_endpoint_is_the_scalar_sum() {
        let tail = TailModel::pareto(1.5, 1.0).unwrap();
        let n = 2000;
        let m = ParetoSumModel::new(SpectralSampler::indicator(), tail, n).unwrap();
        let s = m.sample(&mut RngSeed::new(2, 0).stream());
        let mut rng = RngSeed::new(2, 0).stream();
        let mut total = 0.0;
        for _ in 0..n {
            total += tail.sample(&mut rng) - tail.mean();
            let _ = crate::rng::uniform_open(&mut rng);
        }
        let at_one = s.evaluate(1.0).unwrap()[0];
        assert!((at_one - total / m.a_n()).abs() < 1e-9 * (1.0 + at_one.abs()));
        assert_eq!(s.evaluate(0.0).unwrap()[0], 0.0);
    }

    #[test]
    fn fast_path_matches_generic_sampling() {
        let tail = TailModel::pareto(1.4, 2.0).unwrap();
        let n = 300;
        let m = ParetoSumModel::new(SpectralSampler::renewal_pair(), tail, n).unwrap();
        let fast = m.sample(&mut RngSeed::new(3, 1).stream());
        let array = m.sample_array(&mut RngSeed::new(3, 1).stream(), 3).unwrap();
        let mut b = PathBuilder::new(m.spectral().interval(), 2);
        for p in array.paths() {
            b.add_vector(p, 1.0);
        }
        b.add_vector(m.mean_step(), -(n as f64) * tail.mean());
        let slow = b.finish(1.0 / m.a_n());
        for t in [0.0, 0.1, 0.37, 0.5, 0.99, 1.0] {
            let (x, y) = (fast.evaluate(t).unwrap(), slow.evaluate(t).unwrap());
            for c in 0..2 {
                assert!((x[c] - y[c]).abs() < 1e-9, "t={t} c={c}");
            }
        }
    }

    #[test]
    fn centred_at_grid_times() {
        let tail = TailModel::pareto(1.5, 1.0).unwrap();
        let m = ParetoSumModel::new(SpectralSampler::indicator(), tail, 200).unwrap();
        let reps = 4000;
        for t in [0.25, 0.5, 1.0] {
            let xs: Vec<f64> = (0..reps)
                .map(|r| m.sample(&mut RngSeed::new(4, r).stream()).evaluate(t).unwrap()[0])
                .collect();
            let mean = xs.iter().sum::<f64>() / reps as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
            assert!(mean.abs() < 3.0 * (var / reps as f64).sqrt() + 1e-12, "t={t} mean={mean}");
        }
    }
}
