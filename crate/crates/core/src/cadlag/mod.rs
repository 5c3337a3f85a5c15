//! Piecewise-constant càdlàg functions on a compact interval.
//!
//! A [`StepFunction`] is stored in canonical form: strictly increasing
//! breakpoints in `(a, b]`, one value per plateau, and no zero jumps. The
//! discontinuity set of the function is therefore exactly its breakpoint list.

mod ensemble;
mod moduli;
mod skorokhod;

pub use ensemble::{mean_path, PathEnsemble};
pub use moduli::{oscillation, w_doubleprime};
pub use skorokhod::{bounded_j1_distance, j1_distance, uniform_distance};

use alloc::vec::Vec;

use crate::error::{domain, Result};

/// The closed interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(domain("interval endpoints must be finite"));
        }
        if !(a < b) {
            return Err(domain("interval requires a < b"));
        }
        Ok(Self { a, b })
    }

    /// `[0, 1]`.
    pub const fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }
}

/// A right-continuous step function on an [`Interval`].
///
/// With breakpoints `t_1 < … < t_k` and values `v_0, …, v_k`, the function
/// equals `v_j` on `[t_j, t_{j+1})` (with `t_0 = a`) and `v_k` on `[t_k, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    interval: Interval,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    /// Builds a step function from breakpoints and plateau values, dropping
    /// breakpoints that carry no jump.
    pub fn new(interval: Interval, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != times.len() + 1 {
            return Err(domain("a step function needs one more value than breakpoints"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(domain("step function values must be finite"));
        }
        let mut prev = interval.a;
        for &t in &times {
            if !(t > prev) {
                return Err(domain("breakpoints must be strictly increasing inside (a, b]"));
            }
            prev = t;
        }
        if prev > interval.b {
            return Err(domain("breakpoints must lie inside (a, b]"));
        }
        Ok(Self::canonical(interval, &times, values))
    }

    pub fn constant(interval: Interval, value: f64) -> Self {
        Self {
            interval,
            times: Vec::new(),
            values: alloc::vec![value],
        }
    }

    pub fn zero(interval: Interval) -> Self {
        Self::constant(interval, 0.0)
    }

    /// `height · 1_{[u, b]}`; a constant when `u <= a`, zero when `u > b`.
    pub fn indicator(interval: Interval, u: f64, height: f64) -> Self {
        if u <= interval.a {
            Self::constant(interval, height)
        } else if u > interval.b || height == 0.0 {
            Self::zero(interval)
        } else {
            Self {
                interval,
                times: alloc::vec![u],
                values: alloc::vec![0.0, height],
            }
        }
    }

    /// Builds `initial + Σ_j size_j · 1_{[time_j, b]}` from unsorted jumps.
    ///
    /// Jumps at `time <= a` shift the initial value and jumps after `b` are
    /// ignored. Coincident times are merged.
    pub fn from_jumps(interval: Interval, initial: f64, jumps: &mut [(f64, f64)]) -> Result<Self> {
        if jumps.iter().any(|(t, s)| t.is_nan() || !s.is_finite()) {
            return Err(domain("jump times and sizes must be finite"));
        }
        jumps.sort_unstable_by(|x, y| x.0.total_cmp(&y.0));
        let mut times = Vec::with_capacity(jumps.len());
        let mut values = Vec::with_capacity(jumps.len() + 1);
        let mut level = initial;
        let mut iter = jumps.iter().peekable();
        while let Some(&&(t, s)) = iter.peek() {
            if t > interval.a {
                break;
            }
            level += s;
            iter.next();
        }
        values.push(level);
        for &(t, s) in iter {
            if t > interval.b {
                break;
            }
            level += s;
            if times.last() == Some(&t) {
                *values.last_mut().unwrap() = level;
            } else {
                times.push(t);
                values.push(level);
            }
        }
        if !level.is_finite() {
            return Err(domain("step function values must be finite"));
        }
        Ok(Self::canonical(interval, &times, values))
    }

    /// Values on a merged grid: `values[0]` holds on `[a, grid[0])`,
    /// `values[j]` on `[grid[j-1], grid[j])`.
    pub(crate) fn from_grid_values(interval: Interval, grid: &[f64], values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len() + 1, values.len());
        Self::canonical(interval, grid, values)
    }

    fn canonical(interval: Interval, times: &[f64], values: Vec<f64>) -> Self {
        let mut out_t = Vec::with_capacity(times.len());
        let mut out_v = Vec::with_capacity(values.len());
        out_v.push(values[0]);
        for (&t, &v) in times.iter().zip(&values[1..]) {
            if v != *out_v.last().unwrap() {
                out_t.push(t);
                out_v.push(v);
            }
        }
        Self {
            interval,
            times: out_t,
            values: out_v,
        }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Breakpoints, i.e. the discontinuity set.
    pub fn breakpoints(&self) -> &[f64] {
        &self.times
    }

    /// Plateau values `v_0, …, v_k`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn jump_count(&self) -> usize {
        self.times.len()
    }

    /// Index of the plateau active at `t` (no range check).
    pub(crate) fn plateau_index(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t)
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !self.interval.contains(t) {
            return Err(domain("evaluation time outside the interval"));
        }
        Ok(self.values[self.plateau_index(t)])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, c: f64) -> Self {
        let values = self.values.iter().map(|v| c * v).collect();
        Self::canonical(self.interval, &self.times, values)
    }

    /// Values on `grid`, which must contain every breakpoint of `self`.
    pub(crate) fn values_on_grid(&self, grid: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(grid.len() + 1);
        out.push(self.values[0]);
        let mut j = 0;
        for &t in grid {
            while j < self.times.len() && self.times[j] <= t {
                j += 1;
            }
            out.push(self.values[j]);
        }
        out
    }
}

/// Union of breakpoint sets, sorted, exact duplicates removed.
pub(crate) fn merged_grid<'a>(fs: impl IntoIterator<Item = &'a StepFunction>) -> Vec<f64> {
    let mut grid: Vec<f64> = Vec::new();
    for f in fs {
        grid.extend_from_slice(&f.times);
    }
    grid.sort_unstable_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Pointwise `Σ c_i f_i`, exact on the merged breakpoint grid.
pub fn linear_combine(coeffs: &[f64], fs: &[&StepFunction]) -> Result<StepFunction> {
    if fs.is_empty() {
        return Err(domain("linear_combine needs at least one function"));
    }
    if coeffs.len() != fs.len() {
        return Err(domain("coefficient and function counts differ"));
    }
    let interval = fs[0].interval;
    if fs.iter().any(|f| f.interval != interval) {
        return Err(domain("functions live on different intervals"));
    }
    let grid = merged_grid(fs.iter().copied());
    let mut acc = alloc::vec![0.0; grid.len() + 1];
    for (&c, f) in coeffs.iter().zip(fs) {
        for (a, v) in acc.iter_mut().zip(f.values_on_grid(&grid)) {
            *a += c * v;
        }
    }
    if acc.iter().any(|v| !v.is_finite()) {
        return Err(domain("linear combination overflowed"));
    }
    Ok(StepFunction::from_grid_values(interval, &grid, acc))
}

/// An element of `D_I^ℓ`: `ℓ` step functions on one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorStepFunction {
    components: Vec<StepFunction>,
}

impl VectorStepFunction {
    pub fn new(components: Vec<StepFunction>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(domain("a vector step function needs at least one component"));
        };
        let interval = first.interval;
        if components.iter().any(|c| c.interval != interval) {
            return Err(domain("components live on different intervals"));
        }
        Ok(Self { components })
    }

    pub fn scalar(f: StepFunction) -> Self {
        Self {
            components: alloc::vec![f],
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn interval(&self) -> Interval {
        self.components[0].interval
    }

    pub fn components(&self) -> &[StepFunction] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &StepFunction {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<StepFunction> {
        self.components
    }

    /// `max_i sup_t |x_i(t)|`.
    pub fn sup_norm(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.sup_norm()))
    }

    pub fn evaluate(&self, t: f64) -> Result<Vec<f64>> {
        self.components.iter().map(|c| c.evaluate(t)).collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            components: self.components.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Union of the component discontinuity sets.
    pub fn breakpoints(&self) -> Vec<f64> {
        merged_grid(self.components.iter())
    }
}

/// Vector norm `max_i sup_t |x_i(t)|`.
pub fn sup_norm(f: &VectorStepFunction) -> f64 {
    f.sup_norm()
}
