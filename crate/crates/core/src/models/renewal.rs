//! Renewal–reward processes `R(t)` and their centred occupation integrals.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::cadlag::{Interval, StepFunction};
use crate::error::{domain, Result};
use crate::rng::{exp1, uniform_open, RngSeed, Stream};
use crate::tail::TailModel;

/// Marginal law `G` of the rewards.
#[derive(Debug, Clone, PartialEq)]
pub enum RewardLaw {
    Exponential { mean: f64 },
    Uniform { lo: f64, hi: f64 },
    Constant(f64),
    /// Finite law on sorted distinct `values`.
    Discrete { values: Vec<f64>, probs: Vec<f64> },
}

impl RewardLaw {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Self::Exponential { mean } => *mean > 0.0 && mean.is_finite(),
            Self::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            Self::Constant(c) => c.is_finite(),
            Self::Discrete { values, probs } => {
                !values.is_empty()
                    && values.len() == probs.len()
                    && values.iter().all(|v| v.is_finite())
                    && values.windows(2).all(|w| w[0] < w[1])
                    && probs.iter().all(|&p| p >= 0.0)
                    && (probs.iter().sum::<f64>() - 1.0).abs() < 1e-12
            }
        };
        if ok {
            Ok(())
        } else {
            Err(domain("invalid reward law"))
        }
    }

    /// `G(w)`.
    pub fn cdf(&self, w: f64) -> f64 {
        match self {
            Self::Exponential { mean } => {
                if w <= 0.0 {
                    0.0
                } else {
                    -libm::expm1(-w / mean)
                }
            }
            Self::Uniform { lo, hi } => ((w - lo) / (hi - lo)).clamp(0.0, 1.0),
            Self::Constant(c) => f64::from(u8::from(w >= *c)),
            Self::Discrete { values, probs } => {
                let k = values.partition_point(|&v| v <= w);
                probs[..k].iter().sum::<f64>().min(1.0)
            }
        }
    }

    pub fn sample(&self, rng: &mut Stream) -> f64 {
        match self {
            Self::Exponential { mean } => mean * exp1(rng),
            Self::Uniform { lo, hi } => lo + (hi - lo) * uniform_open(rng),
            Self::Constant(c) => *c,
            Self::Discrete { values, probs } => {
                let u = uniform_open(rng);
                let mut acc = 0.0;
                for (v, p) in values.iter().zip(probs) {
                    acc += p;
                    if u < acc {
                        return *v;
                    }
                }
                values[values.len() - 1]
            }
        }
    }
}

pub type JointSampler = dyn Fn(&mut Stream) -> (f64, f64) + Send + Sync;

/// Dependence between an interarrival `Y_k` and the reward `W_k` of its interval.
#[derive(Clone)]
pub enum Coupling {
    Independent,
    /// Draws `(Y, W)` jointly; `Y` must follow the configured interarrival law.
    Custom(Arc<JointSampler>),
}

impl Coupling {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(&mut Stream) -> (f64, f64) + Send + Sync + 'static,
    {
        Self::Custom(Arc::new(f))
    }
}

impl fmt::Debug for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Independent => f.write_str("Independent"),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// Seed of the fixed Monte Carlo sample behind custom-coupling `F_0`.
const STEADY_STATE_SEED: u64 = 0x5eed_f00d;

#[derive(Debug, Clone)]
pub struct RenewalRewardConfig {
    pub interarrival: TailModel,
    pub reward: RewardLaw,
    pub coupling: Coupling,
    pub horizon: f64,
    pub w_grid: Vec<f64>,
    /// Draws used for `F_0` under a custom coupling.
    pub steady_state_draws: usize,
}

impl RenewalRewardConfig {
    pub fn new(interarrival: TailModel, reward: RewardLaw, horizon: f64, w_grid: Vec<f64>) -> Result<Self> {
        let cfg = Self {
            interarrival,
            reward,
            coupling: Coupling::Independent,
            horizon,
            w_grid,
            steady_state_draws: 1_000_000,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_coupling(mut self, coupling: Coupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_steady_state_draws(mut self, draws: usize) -> Result<Self> {
        if draws == 0 {
            return Err(domain("steady-state Monte Carlo needs draws >= 1"));
        }
        self.steady_state_draws = draws;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.reward.validate()?;
        if !(self.horizon >= 1.0 && self.horizon.is_finite()) {
            return Err(domain("horizon T must be finite and >= 1"));
        }
        if self.w_grid.iter().any(|w| !w.is_finite()) || self.w_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(domain("w_grid must be finite and sorted"));
        }
        Ok(())
    }

    /// `λ = 1 / E[Y]`.
    pub fn rate(&self) -> f64 {
        1.0 / self.interarrival.mean()
    }

    /// `a_T`, from the interarrival tail at the continuous index `T`.
    pub fn a_t(&self) -> Result<f64> {
        self.interarrival.a_t(self.horizon)
    }

    fn draw(&self, rng: &mut Stream) -> (f64, f64) {
        match &self.coupling {
            Coupling::Independent => {
                let y = self.interarrival.sample(rng);
                (y, self.reward.sample(rng))
            }
            Coupling::Custom(f) => f(rng),
        }
    }

    /// `F_0` at every grid point.
    pub fn steady_state(&self) -> Result<Vec<f64>> {
        match self.coupling {
            Coupling::Independent => Ok(self.w_grid.iter().map(|&w| self.reward.cdf(w)).collect()),
            Coupling::Custom(_) => steady_state_many(self, &self.w_grid),
        }
    }
}

/// A simulated reward trajectory on `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenewalPath {
    /// `R(t)`, equal to `W_k` on `[S_{k−1}, S_k)`.
    pub trajectory: StepFunction,
    /// Number of renewal epochs `S_k` in `(0, T]`.
    pub n_renewals: usize,
}

// Calls `visit(start, end, reward)` for every interval clipped to [0, T]; returns the epoch count.
fn simulate(rng: &mut Stream, config: &RenewalRewardConfig, mut visit: impl FnMut(f64, f64, f64)) -> usize {
    let t_end = config.horizon;
    let mut start = 0.0;
    let mut renewals = 0;
    loop {
        let (y, w) = config.draw(rng);
        let end = start + y;
        if end <= t_end {
            visit(start, end, w);
            renewals += 1;
            start = end;
        } else {
            visit(start, t_end, w);
            return renewals;
        }
    }
}

/// One trajectory. For each interval, draws `Y_k` and then `W_k` (or the
/// joint pair for a custom coupling), until an epoch passes `T`.
pub fn renewal_reward_path(rng: &mut Stream, config: &RenewalRewardConfig) -> Result<RenewalPath> {
    config.validate()?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    let n_renewals = simulate(rng, config, |start, _, w| {
        if start > 0.0 {
            times.push(start);
        }
        values.push(w);
    });
    let interval = Interval::new(0.0, config.horizon)?;
    // an epoch landing exactly on T opens an interval of length zero at T
    Ok(RenewalPath {
        trajectory: StepFunction::new(interval, times, values)?,
        n_renewals,
    })
}

fn scaled_occupation(occupation: &[f64], f0: &[f64], horizon: f64, a_t: f64) -> Vec<f64> {
    occupation.iter().zip(f0).map(|(o, f)| (o - horizon * f) / a_t).collect()
}

/// `E_T(w) = a_T^{-1} ∫_0^T (1{R(s) ≤ w} − F_0(w)) ds` for `w` in the grid,
/// with `F_0` given.
pub fn empirical_process_with(rng: &mut Stream, config: &RenewalRewardConfig, f0: &[f64]) -> Result<Vec<f64>> {
    config.validate()?;
    if f0.len() != config.w_grid.len() {
        return Err(domain("one F_0 value per grid point is required"));
    }
    let a_t = config.a_t()?;
    let grid = &config.w_grid;
    let mut occupation = alloc::vec![0.0; grid.len()];
    simulate(rng, config, |start, end, w| {
        let len = end - start;
        // grid is sorted: 1{w_reward ≤ w_j} holds from the first j with w_j ≥ w_reward
        let first = grid.partition_point(|&g| g < w);
        for o in &mut occupation[first..] {
            *o += len;
        }
    });
    Ok(scaled_occupation(&occupation, f0, config.horizon, a_t))
}

/// [`empirical_process_with`] using [`RenewalRewardConfig::steady_state`].
pub fn empirical_process(rng: &mut Stream, config: &RenewalRewardConfig) -> Result<Vec<f64>> {
    let f0 = config.steady_state()?;
    empirical_process_with(rng, config, &f0)
}

/// `E_T` computed by integrating a stored trajectory plateau by plateau.
pub fn empirical_process_from_path(path: &RenewalPath, config: &RenewalRewardConfig, f0: &[f64]) -> Result<Vec<f64>> {
    if f0.len() != config.w_grid.len() {
        return Err(domain("one F_0 value per grid point is required"));
    }
    let f = &path.trajectory;
    let interval = f.interval();
    let mut edges = Vec::with_capacity(f.breakpoints().len() + 2);
    edges.push(interval.a());
    edges.extend_from_slice(f.breakpoints());
    edges.push(interval.b());
    let mut occupation = alloc::vec![0.0; config.w_grid.len()];
    for (k, v) in f.values().iter().enumerate() {
        let len = edges[k + 1] - edges[k];
        for (o, &w) in occupation.iter_mut().zip(&config.w_grid) {
            if *v <= w {
                *o += len;
            }
        }
    }
    Ok(scaled_occupation(&occupation, f0, interval.length(), config.a_t()?))
}

fn steady_state_many(config: &RenewalRewardConfig, ws: &[f64]) -> Result<Vec<f64>> {
    let mut rng = RngSeed::new(STEADY_STATE_SEED, 0).stream();
    let mut acc = alloc::vec![0.0; ws.len()];
    for _ in 0..config.steady_state_draws {
        let (y, w) = config.draw(&mut rng);
        for (a, &x) in acc.iter_mut().zip(ws) {
            if w <= x {
                *a += y;
            }
        }
    }
    // λ E[Y 1{W ≤ w}] with the exact λ; clamp the Monte Carlo noise into [0, 1]
    let scale = config.rate() / config.steady_state_draws as f64;
    Ok(acc.into_iter().map(|a| (a * scale).clamp(0.0, 1.0)).collect())
}

/// `F_0(w) = λ E[Y 1{W ≤ w}]`: exactly `G(w)` under independence, a fixed-seed
/// Monte Carlo average of `config.steady_state_draws` pairs otherwise.
pub fn steady_state_cdf(config: &RenewalRewardConfig, w: f64) -> Result<f64> {
    match config.coupling {
        Coupling::Independent => Ok(config.reward.cdf(w)),
        Coupling::Custom(_) => Ok(steady_state_many(config, &[w])?[0]),
    }
}
