//! Truncated LePage series of the stable limit process.

use alloc::vec::Vec;

use super::PathBuilder;
use crate::cadlag::VectorStepFunction;
use crate::error::{domain, Error, Result};
use crate::rng::{exp1, Stream};
use crate::special::{gamma_frac_moment, gamma_second_moment_tail};
use crate::spectral::{spectral_mean, MeanFunction, SpectralSampler};

pub const DEFAULT_LEPAGE_TERMS: usize = 10_000;

/// Spectral draws used when a custom sampler's mean must be estimated.
const MEAN_DRAWS: usize = 10_000;

/// `(1 + sup|E[W]|) (Σ_{i > K} E[Γ_i^{-2/α}])^{1/2}`, the L² size of the
/// centred remainder `Σ_{i > K} (Γ_i^{-1/α} W_i − E[Γ_i^{-1/α}] E[W])`.
pub fn lepage_tail_bound(alpha: f64, terms: usize, mean_sup: f64) -> Result<f64> {
    Ok((1.0 + mean_sup.abs()) * libm::sqrt(gamma_second_moment_tail(terms, alpha)?))
}

fn minimal_terms(alpha: f64, mean_sup: f64, tol: f64) -> Result<usize> {
    let ok = |k: usize| -> Result<bool> { Ok(lepage_tail_bound(alpha, k, mean_sup)? <= tol) };
    let mut hi = 1usize;
    while !ok(hi)? {
        if hi > usize::MAX / 4 {
            return Err(domain("tail tolerance unreachable"));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    // invariant: !ok(lo) or lo == 0, ok(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `Σ_{i ≤ K} (Γ_i^{-1/α} W_i − E[Γ_i^{-1/α}] E[W])`, ready to sample.
#[derive(Debug, Clone)]
pub struct LepageSeries {
    alpha: f64,
    spectral: SpectralSampler,
    terms: usize,
    tail_bound: f64,
    centering: f64,
    mean: MeanFunction,
    mean_step: VectorStepFunction,
}

impl LepageSeries {
    /// Fails with [`Error::Truncation`] when the tail bound at `terms` exceeds
    /// `tail_tol`; the error carries the smallest adequate `K`.
    pub fn new(alpha: f64, spectral: SpectralSampler, terms: usize, tail_tol: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(domain("alpha must lie in (1, 2)"));
        }
        if terms == 0 {
            return Err(domain("LePage series needs K >= 1"));
        }
        if !(tail_tol > 0.0) {
            return Err(domain("tail tolerance must be positive"));
        }
        let mean = spectral_mean(&spectral, MEAN_DRAWS, 0)?;
        let tail_bound = lepage_tail_bound(alpha, terms, mean.sup_norm())?;
        if tail_bound > tail_tol {
            return Err(Error::Truncation {
                terms,
                bound: tail_bound,
                tol: tail_tol,
                required_terms: minimal_terms(alpha, mean.sup_norm(), tail_tol)?,
            });
        }
        let mut centering = 0.0;
        for i in 1..=terms {
            centering += gamma_frac_moment(i, alpha)?;
        }
        let mean_step = mean.to_step();
        Ok(Self {
            alpha,
            spectral,
            terms,
            tail_bound,
            centering,
            mean,
            mean_step,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `Σ_{i ≤ K} E[Γ_i^{-1/α}]`.
    pub fn centering(&self) -> f64 {
        self.centering
    }

    pub fn spectral_mean(&self) -> &MeanFunction {
        &self.mean
    }

    /// One truncated series path. Draws, for each `i`, the exponential
    /// increment of `Γ_i` and then `W_i`.
    pub fn sample(&self, rng: &mut Stream) -> VectorStepFunction {
        let dim = self.spectral.dim();
        let mut b = PathBuilder::with_capacity(self.spectral.interval(), dim, self.terms + self.mean_step.breakpoints().len());
        let mut gamma = 0.0;
        for _ in 0..self.terms {
            gamma += exp1(rng);
            let r = libm::pow(gamma, -1.0 / self.alpha);
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
        b.add_vector(&self.mean_step, -self.centering);
        b.finish(1.0)
    }

    /// Values of the first component of [`Self::sample`] at `times`, for the
    /// same stream state, without assembling the path.
    pub fn sample_at(&self, rng: &mut Stream, times: &[f64]) -> Result<Vec<f64>> {
        if times.iter().any(|t| !self.spectral.interval().contains(*t)) {
            return Err(domain("evaluation time outside the interval"));
        }
        let mut out = alloc::vec![0.0; times.len()];
        let mut gamma = 0.0;
        for _ in 0..self.terms {
            gamma += exp1(rng);
            let r = libm::pow(gamma, -1.0 / self.alpha);
            match self.spectral.sample_jump_time(rng) {
                Some(u) => {
                    for (o, &t) in out.iter_mut().zip(times) {
                        if u <= t {
                            *o += r;
                        }
                    }
                }
                None => {
                    let w = self.spectral.sample(rng);
                    for (o, &t) in out.iter_mut().zip(times) {
                        *o += r * w.component(0).evaluate(t)?;
                    }
                }
            }
        }
        for (o, &t) in out.iter_mut().zip(times) {
            *o -= self.centering * self.mean_step.component(0).evaluate(t)?;
        }
        Ok(out)
    }
}

/// One path of the `K`-term series; see [`LepageSeries::new`] for errors.
pub fn lepage_sample(
    rng: &mut Stream,
    alpha: f64,
    spectral: &SpectralSampler,
    terms: usize,
    tail_tol: f64,
) -> Result<VectorStepFunction> {
    Ok(LepageSeries::new(alpha, spectral.clone(), terms, tail_tol)?.sample(rng))
}
