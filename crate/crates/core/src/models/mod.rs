//! Constructors for the heavy-tailed processes and their stable limits.

mod exceedance;
mod lepage;
mod pareto_sum;
mod partial_sum;
mod renewal;
mod truncation;

pub use exceedance::{exceedance_process, ExceedancePoint, ExceedanceProcess};
pub use lepage::{lepage_sample, lepage_tail_bound, LepageSeries, DEFAULT_LEPAGE_TERMS};
pub use pareto_sum::{pareto_sum_process, ParetoSumModel};
pub use partial_sum::{partial_sum_array, partial_sum_process, partial_sum_truncated_stats, TruncatedStat};
pub use renewal::{
    empirical_process, empirical_process_from_path, empirical_process_with, renewal_reward_path, steady_state_cdf, Coupling, JointSampler, RenewalPath,
    RenewalRewardConfig, RewardLaw,
};
pub use truncation::{full_centered_sum, truncated_sum, Side, TruncationCentering};

use alloc::vec::Vec;

use crate::cadlag::{Interval, StepFunction, VectorStepFunction};

/// Accumulates `Σ c_j f_j` as initial values plus jump lists, one per component.
#[derive(Debug, Clone)]
pub(crate) struct PathBuilder {
    interval: Interval,
    initial: Vec<f64>,
    jumps: Vec<Vec<(f64, f64)>>,
}

impl PathBuilder {
    pub(crate) fn new(interval: Interval, dim: usize) -> Self {
        Self {
            interval,
            initial: alloc::vec![0.0; dim],
            jumps: alloc::vec![Vec::new(); dim],
        }
    }

    pub(crate) fn with_capacity(interval: Interval, dim: usize, jumps: usize) -> Self {
        Self {
            interval,
            initial: alloc::vec![0.0; dim],
            jumps: (0..dim).map(|_| Vec::with_capacity(jumps)).collect(),
        }
    }

    pub(crate) fn add_constant(&mut self, component: usize, c: f64) {
        self.initial[component] += c;
    }

    pub(crate) fn add_jump(&mut self, component: usize, t: f64, size: f64) {
        self.jumps[component].push((t, size));
    }

    pub(crate) fn add_step(&mut self, component: usize, f: &StepFunction, c: f64) {
        self.initial[component] += c * f.values()[0];
        for (t, w) in f.breakpoints().iter().zip(f.values().windows(2)) {
            self.jumps[component].push((*t, c * (w[1] - w[0])));
        }
    }

    pub(crate) fn add_vector(&mut self, f: &VectorStepFunction, c: f64) {
        for (i, comp) in f.components().iter().enumerate() {
            self.add_step(i, comp, c);
        }
    }

    /// The accumulated function multiplied by `scale`.
    pub(crate) fn finish(self, scale: f64) -> VectorStepFunction {
        let interval = self.interval;
        let comps = self
            .initial
            .into_iter()
            .zip(self.jumps)
            .map(|(v0, mut jumps)| {
                jumps.iter_mut().for_each(|j| j.1 *= scale);
                StepFunction::from_jumps(interval, v0 * scale, &mut jumps).expect("finite path")
            })
            .collect();
        VectorStepFunction::new(comps).expect("shared interval")
    }
}
