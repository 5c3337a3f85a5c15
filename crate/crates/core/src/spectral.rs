//! Samplers of unit-sup-norm spectral paths and their mean functions.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::cadlag::{mean_path, Interval, PathEnsemble, StepFunction, VectorStepFunction};
use crate::error::{domain, Result};
use crate::rng::{uniform_open, RngSeed, Stream};

/// Dense-grid size used for continuous mean functions.
pub const DEFAULT_MEAN_GRID: usize = 2048;

pub type PathGenerator = dyn Fn(&mut Stream) -> VectorStepFunction + Send + Sync;

/// Which spectral measure a [`SpectralSampler`] draws from.
#[derive(Clone)]
pub enum SpectralKind {
    /// `1_{[U, 1]}`, `U` uniform on `(0, 1)`.
    Indicator,
    /// `(1_{[U, 1]}, 1_{[0, 1]})`.
    RenewalPair,
    /// `1_{[0, 1]}`.
    ConstantOne,
    /// User-supplied generator; its emitted paths are checked for unit norm
    /// by the caller through [`fixed_jump_check`] and [`SpectralSampler::sample`].
    Custom {
        generator: Arc<PathGenerator>,
        dim: usize,
        fixed_jump_free: bool,
    },
}

impl fmt::Debug for SpectralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Indicator => f.write_str("Indicator"),
            Self::RenewalPair => f.write_str("RenewalPair"),
            Self::ConstantOne => f.write_str("ConstantOne"),
            Self::Custom { dim, fixed_jump_free, .. } => f
                .debug_struct("Custom")
                .field("dim", dim)
                .field("fixed_jump_free", fixed_jump_free)
                .finish(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralSampler {
    kind: SpectralKind,
    mean_grid: usize,
}

impl SpectralSampler {
    pub fn indicator() -> Self {
        Self::from_kind(SpectralKind::Indicator)
    }

    pub fn renewal_pair() -> Self {
        Self::from_kind(SpectralKind::RenewalPair)
    }

    pub fn constant_one() -> Self {
        Self::from_kind(SpectralKind::ConstantOne)
    }

    pub fn custom<G>(generator: G, dim: usize, fixed_jump_free: bool) -> Result<Self>
    where
        G: Fn(&mut Stream) -> VectorStepFunction + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(domain("spectral paths need dimension >= 1"));
        }
        Ok(Self::from_kind(SpectralKind::Custom {
            generator: Arc::new(generator),
            dim,
            fixed_jump_free,
        }))
    }

    fn from_kind(kind: SpectralKind) -> Self {
        Self {
            kind,
            mean_grid: DEFAULT_MEAN_GRID,
        }
    }

    /// Number of intervals of the dense grid carrying continuous means.
    pub fn with_mean_grid(mut self, intervals: usize) -> Result<Self> {
        if intervals == 0 {
            return Err(domain("mean grid needs at least one interval"));
        }
        self.mean_grid = intervals;
        Ok(self)
    }

    pub fn kind(&self) -> &SpectralKind {
        &self.kind
    }

    pub fn interval(&self) -> Interval {
        Interval::unit()
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SpectralKind::RenewalPair => 2,
            SpectralKind::Custom { dim, .. } => *dim,
            _ => 1,
        }
    }

    /// Whether the sampler claims that no time is a fixed discontinuity.
    pub fn fixed_jump_free(&self) -> bool {
        match &self.kind {
            SpectralKind::Custom { fixed_jump_free, .. } => *fixed_jump_free,
            _ => true,
        }
    }

    pub fn sample(&self, rng: &mut Stream) -> VectorStepFunction {
        match &self.kind {
            SpectralKind::Indicator => VectorStepFunction::scalar(indicator_spectral(rng)),
            SpectralKind::RenewalPair => renewal_spectral(rng),
            SpectralKind::ConstantOne => VectorStepFunction::scalar(StepFunction::constant(Interval::unit(), 1.0)),
            SpectralKind::Custom { generator, .. } => generator(rng),
        }
    }

    /// Jump time of an indicator-type draw, for the kinds that have one.
    pub(crate) fn sample_jump_time(&self, rng: &mut Stream) -> Option<f64> {
        match self.kind {
            SpectralKind::Indicator | SpectralKind::RenewalPair => Some(uniform_open(rng)),
            _ => None,
        }
    }
}

/// `1_{[U, 1]}` with `U` uniform on `(0, 1)`.
pub fn indicator_spectral(rng: &mut Stream) -> StepFunction {
    StepFunction::indicator(Interval::unit(), uniform_open(rng), 1.0)
}

/// `(1_{[U, 1]}, 1_{[0, 1]})`.
pub fn renewal_spectral(rng: &mut Stream) -> VectorStepFunction {
    let first = indicator_spectral(rng);
    VectorStepFunction::new(alloc::vec![first, StepFunction::constant(Interval::unit(), 1.0)])
        .expect("components share [0, 1]")
}

/// `E[W](t) = E[W(t)]`.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanFunction {
    /// Exact step function.
    Step(VectorStepFunction),
    /// Continuous function, linearly interpolated between grid nodes.
    Dense {
        grid: Vec<f64>,
        components: Vec<Vec<f64>>,
    },
}

impl MeanFunction {
    fn dense_linear(grid_intervals: usize, dim: usize, f: impl Fn(usize, f64) -> f64) -> Self {
        let grid: Vec<f64> = (0..=grid_intervals).map(|k| k as f64 / grid_intervals as f64).collect();
        let components = (0..dim).map(|c| grid.iter().map(|&t| f(c, t)).collect()).collect();
        MeanFunction::Dense { grid, components }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Step(f) => f.dim(),
            Self::Dense { components, .. } => components.len(),
        }
    }

    pub fn evaluate(&self, component: usize, t: f64) -> Result<f64> {
        match self {
            Self::Step(f) => f.component(component).evaluate(t),
            Self::Dense { grid, components } => {
                let (lo, hi) = (grid[0], grid[grid.len() - 1]);
                if !(lo..=hi).contains(&t) {
                    return Err(domain("evaluation time outside the interval"));
                }
                let v = &components[component];
                let j = grid.partition_point(|&g| g <= t);
                if j >= grid.len() {
                    return Ok(v[grid.len() - 1]);
                }
                let w = (t - grid[j - 1]) / (grid[j] - grid[j - 1]);
                Ok(v[j - 1] + w * (v[j] - v[j - 1]))
            }
        }
    }

    /// `max_i sup_t |E[W_i](t)|`.
    pub fn sup_norm(&self) -> f64 {
        match self {
            Self::Step(f) => f.sup_norm(),
            Self::Dense { components, .. } => components
                .iter()
                .flat_map(|c| c.iter())
                .fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    /// Right-continuous step version, exact at every grid node.
    pub fn to_step(&self) -> VectorStepFunction {
        match self {
            Self::Step(f) => f.clone(),
            Self::Dense { grid, components } => {
                let interval = Interval::new(grid[0], grid[grid.len() - 1]).expect("grid spans an interval");
                let comps = components
                    .iter()
                    .map(|vals| StepFunction::from_grid_values(interval, &grid[1..], vals.clone()))
                    .collect();
                VectorStepFunction::new(comps).expect("shared interval")
            }
        }
    }
}

/// Mean function of the sampler's spectral measure.
///
/// Built-in kinds have closed forms; custom kinds are averaged over
/// `fallback_draws` paths drawn from streams `(seed, 0..fallback_draws)`.
pub fn spectral_mean(sampler: &SpectralSampler, fallback_draws: usize, seed: u64) -> Result<MeanFunction> {
    let n = sampler.mean_grid;
    Ok(match &sampler.kind {
        SpectralKind::Indicator => MeanFunction::dense_linear(n, 1, |_, t| t),
        SpectralKind::RenewalPair => MeanFunction::dense_linear(n, 2, |c, t| if c == 0 { t } else { 1.0 }),
        SpectralKind::ConstantOne => {
            MeanFunction::Step(VectorStepFunction::scalar(StepFunction::constant(Interval::unit(), 1.0)))
        }
        SpectralKind::Custom { generator, .. } => {
            if fallback_draws == 0 {
                return Err(domain("Monte Carlo mean needs at least one draw"));
            }
            let paths = (0..fallback_draws as u64)
                .map(|i| generator(&mut RngSeed::new(seed, i).stream()))
                .collect();
            MeanFunction::Step(mean_path(&PathEnsemble::new(paths, seed, "spectral-mean")?))
        }
    })
}

/// Observed evidence about fixed discontinuities of a spectral sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedJumpReport {
    pub draws: usize,
    pub grid: Vec<f64>,
    /// Fraction of draws with a breakpoint exactly at each grid time.
    pub fraction_at_grid: Vec<f64>,
    /// Number of path pairs sharing an exact breakpoint time.
    pub common_breakpoint_pairs: u64,
    /// Every draw had sup norm exactly one.
    pub unit_norm: bool,
}

impl FixedJumpReport {
    pub fn passed(&self) -> bool {
        self.unit_norm && self.common_breakpoint_pairs == 0 && self.fraction_at_grid.iter().all(|&f| f == 0.0)
    }

    /// A finite sample can only fail to contradict the no-fixed-jump condition.
    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "consistent with no fixed jumps"
        } else {
            "fixed jumps observed"
        }
    }
}

/// Draws `m` paths (stream `(seed, i)` for path `i`) and looks for shared
/// breakpoints.
pub fn fixed_jump_check(sampler: &SpectralSampler, m: usize, grid: &[f64], seed: u64) -> Result<FixedJumpReport> {
    if m < 2 {
        return Err(domain("fixed-jump check needs m >= 2"));
    }
    let mut hits = alloc::vec![0usize; grid.len()];
    let mut all: Vec<(f64, usize)> = Vec::new();
    let mut unit_norm = true;
    for i in 0..m {
        let path = sampler.sample(&mut RngSeed::new(seed, i as u64).stream());
        unit_norm &= path.sup_norm() == 1.0;
        let bps = path.breakpoints();
        for (h, t) in hits.iter_mut().zip(grid) {
            if bps.binary_search_by(|b| b.total_cmp(t)).is_ok() {
                *h += 1;
            }
        }
        all.extend(bps.into_iter().map(|t| (t, i)));
    }
    all.sort_unstable_by(|x, y| x.0.total_cmp(&y.0));
    let mut pairs = 0u64;
    let mut run = 1u64;
    for w in all.windows(2) {
        if w[0].0 == w[1].0 {
            run += 1;
        } else {
            pairs += run * (run - 1) / 2;
            run = 1;
        }
    }
    pairs += run * (run - 1) / 2;
    Ok(FixedJumpReport {
        draws: m,
        grid: grid.to_vec(),
        fraction_at_grid: hits.iter().map(|&h| h as f64 / m as f64).collect(),
        common_breakpoint_pairs: pairs,
        unit_norm,
    })
}
