//! Statistical checks of simulated samples against the stable limits.
//!
//! Reductions take precomputed per-replicate results, so callers can produce
//! replicates in any order or in parallel and still get identical reports.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cadlag::{j1_distance, mean_path, uniform_distance, Interval, PathEnsemble, StepFunction, VectorStepFunction};
use crate::error::{domain, Error, Result};
use crate::models::{ExceedanceProcess, TruncatedStat};
use crate::rng::Stream;
use crate::stable::{stable_cf, StableParams};
use crate::tail::TailModel;

/// `(1/m) Σ_j e^{i t x_j}`.
pub fn empirical_cf(samples: &[f64], t: f64) -> Result<Complex64> {
    if samples.is_empty() {
        return Err(domain("empirical CF needs at least one sample"));
    }
    let (mut re, mut im) = (0.0, 0.0);
    for &x in samples {
        let (s, c) = libm::sincos(t * x);
        re += c;
        im += s;
    }
    let m = samples.len() as f64;
    Ok(Complex64::new(re / m, im / m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfComparisonReport {
    pub t_grid: Vec<f64>,
    pub empirical: Vec<Complex64>,
    pub model: Vec<Complex64>,
    /// Stable scale `σ` fitted to the empirical modulus.
    pub fitted_scale: f64,
    pub max_abs_gap: f64,
}

impl CfComparisonReport {
    /// The fitted stable law, centred at zero.
    pub fn fitted_law(&self, alpha: f64, beta: f64) -> Result<StableParams> {
        StableParams::new(alpha, self.fitted_scale, beta, 0.0)
    }
}

/// Compares the empirical CF with `S_α(σ, β, 0)` where only `σ` is fitted.
///
/// `σ^α` starts from the least-squares slope of `−log|φ̂(t)|` on `|t|^α`
/// (points with `|φ̂| ≥ 0.05` only, where the logarithm is not noise) and is
/// refined by minimizing `Σ_t |φ̂(t) − φ(t; σ)|²`.
pub fn cf_shape_test(samples: &[f64], alpha: f64, beta: f64, t_grid: &[f64]) -> Result<CfComparisonReport> {
    if t_grid.iter().all(|&t| t == 0.0) {
        return Err(domain("t grid needs a nonzero point"));
    }
    let empirical = t_grid.iter().map(|&t| empirical_cf(samples, t)).collect::<Result<Vec<_>>>()?;
    let log_fit = |floor: f64| {
        let (mut sxy, mut sxx, mut signal) = (0.0, 0.0, 0.0f64);
        for (&t, phi) in t_grid.iter().zip(&empirical) {
            let modulus = phi.norm();
            if t == 0.0 || modulus < floor {
                continue;
            }
            let x = libm::pow(t.abs(), alpha);
            let y = -libm::log(modulus);
            sxy += x * y;
            sxx += x * x;
            signal = signal.max(y);
        }
        (sxy, sxx, signal)
    };
    let (mut sxy, mut sxx, signal) = log_fit(0.05);
    if sxx == 0.0 || !(sxy > 0.0) {
        (sxy, sxx, _) = log_fit(1e-12);
    }
    if signal < 1e-3 || sxx == 0.0 || !(sxy > 0.0) {
        return Err(Error::Underflow(String::from(
            "empirical CF modulus is indistinguishable from 1 on the grid; use larger |t|",
        )));
    }
    let gap2 = |c: f64| -> Result<f64> {
        let params = StableParams::new(alpha, libm::pow(c, 1.0 / alpha), beta, 0.0)?;
        Ok(t_grid
            .iter()
            .zip(&empirical)
            .map(|(&t, e)| (e - stable_cf(&params, t)).norm_sqr())
            .sum())
    };
    let c0 = sxy / sxx;
    let fitted_pow = golden_min(gap2, c0 / 4.0, 4.0 * c0)?;
    let fitted_scale = libm::pow(fitted_pow, 1.0 / alpha);
    let params = StableParams::new(alpha, fitted_scale, beta, 0.0)?;
    let model: Vec<_> = t_grid.iter().map(|&t| stable_cf(&params, t)).collect();
    let max_abs_gap = empirical.iter().zip(&model).map(|(e, m)| (e - m).norm()).fold(0.0, f64::max);
    Ok(CfComparisonReport {
        t_grid: t_grid.to_vec(),
        empirical,
        model,
        fitted_scale,
        max_abs_gap,
    })
}

fn golden_min<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64) -> Result<f64> {
    let r = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > 1e-10 * (a.abs() + b.abs()) {
        if f1 <= f2 {
            b = x2;
            (x2, f2) = (x1, f1);
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            (x1, f1) = (x2, f2);
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok((a + b) / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsReport {
    pub statistic: f64,
    pub n_samples: usize,
    pub reference: String,
    pub pass_threshold: f64,
}

impl KsReport {
    pub fn passed(&self) -> bool {
        self.statistic < self.pass_threshold
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.pass_threshold = threshold;
        self
    }
}

/// Asymptotic 99% quantile of the Kolmogorov distribution.
pub const KOLMOGOROV_99: f64 = 1.63;

/// `sup_x |F̂(x) − F(x)|` against `cdf`; the default threshold is `1.63/√m`.
pub fn ks_test<F>(samples: &[f64], mut cdf: F, reference: &str) -> Result<KsReport>
where
    F: FnMut(f64) -> Result<f64>,
{
    if samples.len() < 100 {
        return Err(domain("KS test needs at least 100 samples"));
    }
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    let m = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max((i + 1) as f64 / m - f).max(f - i as f64 / m);
    }
    Ok(KsReport {
        statistic: d.clamp(0.0, 1.0),
        n_samples: xs.len(),
        reference: String::from(reference),
        pass_threshold: KOLMOGOROV_99 / libm::sqrt(m),
    })
}

/// Two-sample statistic `sup_x |F̂_a(x) − F̂_b(x)|`.
pub fn two_sample_ks(a: &[f64], b: &[f64], reference: &str) -> Result<KsReport> {
    if a.is_empty() || b.is_empty() {
        return Err(domain("two-sample KS needs nonempty samples"));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    let (m, n) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / m - j as f64 / n).abs());
    }
    Ok(KsReport {
        statistic: d,
        n_samples: xs.len() + ys.len(),
        reference: String::from(reference),
        pass_threshold: KOLMOGOROV_99 * libm::sqrt((m + n) / (m * n)),
    })
}

/// `#{radii > r}` for each `r`.
pub fn exceedance_counts(process: &ExceedanceProcess, r_grid: &[f64]) -> Vec<usize> {
    r_grid.iter().map(|&r| process.count_above(r)).collect()
}

/// Counts of `z_k / a_n > r` over one row `z_1, …, z_n`, without building paths.
pub fn row_exceedance_counts(rng: &mut Stream, n: usize, tail: &TailModel, r_grid: &[f64]) -> Result<Vec<usize>> {
    let a_n = tail.a_n(n as u64)?;
    let mut counts = alloc::vec![0usize; r_grid.len()];
    for _ in 0..n {
        let radius = tail.sample(rng) / a_n;
        for (c, &r) in counts.iter_mut().zip(r_grid) {
            if radius > r {
                *c += 1;
            }
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonRow {
    pub r: f64,
    /// `r^{-α}`.
    pub expected: f64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub pass: bool,
}

impl PoissonRow {
    pub fn dispersion(&self) -> f64 {
        self.variance / self.mean
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonReport {
    pub alpha: f64,
    pub n: usize,
    pub replicates: usize,
    pub rows: Vec<PoissonRow>,
}

impl PoissonReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Dispersion band required of `variance / mean`.
pub const DISPERSION_BAND: (f64, f64) = (0.9, 1.1);

/// Reduces per-replicate counts (one vector per replicate, aligned with `r_grid`).
pub fn poisson_report(counts: &[Vec<usize>], r_grid: &[f64], alpha: f64, n: usize) -> Result<PoissonReport> {
    if counts.len() < 2 {
        return Err(domain("need at least two replicates"));
    }
    if r_grid.iter().any(|&r| !(r > 0.0)) {
        return Err(domain("radii must be positive"));
    }
    if counts.iter().any(|c| c.len() != r_grid.len()) {
        return Err(domain("one count per radius is required"));
    }
    let reps = counts.len() as f64;
    let rows = r_grid
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let mean = counts.iter().map(|c| c[j] as f64).sum::<f64>() / reps;
            let variance = counts.iter().map(|c| (c[j] as f64 - mean).powi(2)).sum::<f64>() / (reps - 1.0);
            let std_error = libm::sqrt(variance / reps);
            let expected = libm::pow(r, -alpha);
            let dispersion = variance / mean;
            let pass = (mean - expected).abs() <= 3.0 * std_error
                && (DISPERSION_BAND.0..=DISPERSION_BAND.1).contains(&dispersion);
            PoissonRow {
                r,
                expected,
                mean,
                variance,
                std_error,
                pass,
            }
        })
        .collect();
    Ok(PoissonReport {
        alpha,
        n,
        replicates: counts.len(),
        rows,
    })
}

/// Runs `runner(replicate)` sequentially for every replicate and reduces.
pub fn poisson_exceedance_test<R>(
    mut runner: R,
    n: usize,
    r_grid: &[f64],
    alpha: f64,
    replicates: usize,
) -> Result<PoissonReport>
where
    R: FnMut(u64) -> Result<Vec<usize>>,
{
    let counts = (0..replicates as u64).map(&mut runner).collect::<Result<Vec<_>>>()?;
    poisson_report(&counts, r_grid, alpha, n)
}

/// Least-squares nondecreasing fit (pool adjacent violators).
pub fn isotonic_fit(ys: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(ys.len());
    for &y in ys {
        blocks.push((y, 1));
        while blocks.len() > 1 {
            let (m2, w2) = blocks[blocks.len() - 1];
            let (m1, w1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.pop();
            let w = w1 + w2;
            *blocks.last_mut().unwrap() = ((m1 * w1 as f64 + m2 * w2 as f64) / w as f64, w);
        }
    }
    blocks.into_iter().flat_map(|(m, w)| core::iter::repeat(m).take(w)).collect()
}

/// Ordinary least-squares slope of `ys` on `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegligibilityCurve {
    /// Increasing truncation levels.
    pub epsilons: Vec<f64>,
    /// `P(‖S_n^{<ε}‖ > η)` per level.
    pub exceed_prob: Vec<f64>,
    /// `var(S_n^{<ε}(1))` per level.
    pub variances: Vec<f64>,
    pub eta: f64,
    pub n: usize,
    /// Slope of `log var` against `log ε`.
    pub fitted_slope: f64,
    /// Largest gap between `exceed_prob` and its nondecreasing fit in `ε`.
    pub isotonic_residual: f64,
}

/// Reduces per-replicate statistics (one vector per replicate, aligned with
/// `epsilons`).
pub fn negligibility_from_stats(stats: &[Vec<TruncatedStat>], epsilons: &[f64], eta: f64, n: usize) -> Result<NegligibilityCurve> {
    if epsilons.len() < 2 || epsilons.windows(2).any(|w| !(w[0] < w[1])) || !(epsilons[0] > 0.0) {
        return Err(domain("epsilons must be positive and strictly increasing, at least two"));
    }
    if !(eta > 0.0) {
        return Err(domain("eta must be positive"));
    }
    if stats.len() < 2 || stats.iter().any(|s| s.len() != epsilons.len()) {
        return Err(domain("need at least two replicates with one statistic per level"));
    }
    let reps = stats.len() as f64;
    let mut exceed_prob = Vec::with_capacity(epsilons.len());
    let mut variances = Vec::with_capacity(epsilons.len());
    for j in 0..epsilons.len() {
        let hits = stats.iter().filter(|s| s[j].sup_norm > eta).count();
        exceed_prob.push(hits as f64 / reps);
        let mean = stats.iter().map(|s| s[j].value_at_one).sum::<f64>() / reps;
        variances.push(stats.iter().map(|s| (s[j].value_at_one - mean).powi(2)).sum::<f64>() / (reps - 1.0));
    }
    let iso = isotonic_fit(&exceed_prob);
    let isotonic_residual = iso.iter().zip(&exceed_prob).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let lx: Vec<f64> = epsilons.iter().map(|e| libm::log(*e)).collect();
    let ly: Vec<f64> = variances.iter().map(|v| libm::log(*v)).collect();
    Ok(NegligibilityCurve {
        epsilons: epsilons.to_vec(),
        exceed_prob,
        variances,
        eta,
        n,
        fitted_slope: ols_slope(&lx, &ly),
        isotonic_residual,
    })
}

/// Runs `runner(replicate)` sequentially for every replicate and reduces.
pub fn negligibility_curve<R>(mut runner: R, epsilons: &[f64], eta: f64, n: usize, replicates: usize) -> Result<NegligibilityCurve>
where
    R: FnMut(u64) -> Result<Vec<TruncatedStat>>,
{
    let stats = (0..replicates as u64).map(&mut runner).collect::<Result<Vec<_>>>()?;
    negligibility_from_stats(&stats, epsilons, eta, n)
}

/// `n a_n^{-2} var(z 1{z ≤ a_n ε})`, the exact variance of `S_n^{<ε}(1)`.
pub fn truncated_variance(tail: &TailModel, n: usize, eps: f64) -> Result<f64> {
    let a_n = tail.a_n(n as u64)?;
    let c = a_n * eps;
    let m1 = tail.truncated_moment(1, c)?;
    let m2 = tail.truncated_moment(2, c)?;
    Ok(n as f64 * (m2 - m1 * m1) / (a_n * a_n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureResult {
    pub name: &'static str,
    pub pass: bool,
    pub statistic: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub fixtures: Vec<FixtureResult>,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.fixtures.iter().all(|f| f.pass)
    }

    pub fn get(&self, name: &str) -> Option<&FixtureResult> {
        self.fixtures.iter().find(|f| f.name == name)
    }
}

const J1_TOL: f64 = 1e-9;

fn scalar_ensemble(paths: Vec<StepFunction>, tag: &str) -> PathEnsemble {
    PathEnsemble::new(paths.into_iter().map(VectorStepFunction::scalar).collect(), 0, tag).expect("nonempty")
}

/// A jump displaced by `U/n`: close in J1, at uniform distance one.
pub fn levy_fixture(u: f64, n: usize) -> Result<FixtureResult> {
    let i = Interval::unit();
    let x = StepFunction::indicator(i, u, 1.0);
    let xn = StepFunction::indicator(i, u * (n as f64 - 1.0) / n as f64, 1.0);
    let d = j1_distance(&xn, &x, J1_TOL)?;
    let uni = uniform_distance(&xn, &x)?;
    let bound = u / n as f64 + J1_TOL;
    Ok(FixtureResult {
        name: "levy",
        pass: d <= bound && uni == 1.0,
        statistic: d,
        threshold: bound,
        detail: format!("U={u} n={n} j1={d:.3e} uniform={uni}"),
    })
}

/// Mean of `1_{[U_n, 1]}` over the two-point law `U_n ∈ {1/2 − 1/n, 1/2}`.
pub fn j1_staircase(n: usize) -> VectorStepFunction {
    let i = Interval::unit();
    let jumps = [0.5 - 1.0 / n as f64, 0.5];
    mean_path(&scalar_ensemble(jumps.iter().map(|&u| StepFunction::indicator(i, u, 1.0)).collect(), "j1"))
}

/// The staircase of height-½ jumps stays J1-far from the unit jump at ½.
pub fn j1_fixture(ns: &[usize]) -> Result<FixtureResult> {
    let target = StepFunction::indicator(Interval::unit(), 0.5, 1.0);
    let mut worst = f64::INFINITY;
    let mut plateaus_ok = true;
    for &n in ns {
        let m = j1_staircase(n);
        plateaus_ok &= m.component(0).values() == [0.0, 0.5, 1.0];
        worst = worst.min(j1_distance(m.component(0), &target, J1_TOL)?);
    }
    Ok(FixtureResult {
        name: "j1_counterexample",
        pass: plateaus_ok && worst >= 0.25,
        statistic: worst,
        threshold: 0.25,
        detail: format!("min over n of j1 distance {worst}; plateau 1/2 at every n: {plateaus_ok}"),
    })
}

/// Mean of `1_{[u_n, 1]}` and `−1_{[v_n, 1]}` with probability ½ each.
pub fn m1_mean(n: usize) -> VectorStepFunction {
    let i = Interval::unit();
    let (u, v) = (0.5 - 1.0 / n as f64, 0.5 - 0.5 / n as f64);
    mean_path(&scalar_ensemble(
        alloc::vec![StepFunction::indicator(i, u, 1.0), StepFunction::indicator(i, v, -1.0)],
        "m1",
    ))
}

/// Sup norms of [`m1_mean`] for `n = 2, …, n_max`.
pub fn m1_sup_norms(n_max: usize) -> Vec<f64> {
    (2..=n_max).map(|n| m1_mean(n).sup_norm()).collect()
}

/// The mean bump keeps a constant height while vanishing pointwise.
pub fn m1_fixture(n_max: usize, probes: &[f64]) -> Result<FixtureResult> {
    let sups = m1_sup_norms(n_max);
    let lo = sups.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sups.iter().copied().fold(0.0, f64::max);
    let last = m1_mean(n_max);
    let mut pointwise = 0.0f64;
    for &t in probes {
        pointwise = pointwise.max(last.component(0).evaluate(t)?.abs());
    }
    Ok(FixtureResult {
        name: "m1_counterexample",
        pass: lo == hi && lo > 0.0 && pointwise == 0.0,
        statistic: lo,
        threshold: hi,
        detail: format!("sup norm in [{lo}, {hi}] for n in 2..={n_max}; max |mean| at probes, n={n_max}: {pointwise}"),
    })
}

/// The three deterministic fixtures with their default settings.
pub fn counterexample_suite() -> Result<CounterexampleReport> {
    let ns = [3, 4, 10, 100, 1000, 10_000];
    Ok(CounterexampleReport {
        fixtures: alloc::vec![
            levy_fixture(0.7, 100)?,
            j1_fixture(&ns)?,
            m1_fixture(10_000, &[0.1, 0.3, 0.49, 0.5, 0.6, 0.9, 1.0])?,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;
    use crate::stable::{sample_stable, stable_cdf};
    use core::f64::consts::PI;

    fn normal(rng: &mut Stream) -> f64 {
        rand_distr::Distribution::<f64>::sample(&rand_distr::StandardNormal, rng)
    }

    fn t_grid() -> Vec<f64> {
        (1..=10).map(|k| 0.2 * k as f64).collect()
    }

    #[test]
    fn empirical_cf_examples() {
        assert_eq!(empirical_cf(&[3.0, -1.0], 0.0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(empirical_cf(&[0.0; 5], 2.3).unwrap(), Complex64::new(1.0, 0.0));
        let z = empirical_cf(&[-1.0, 1.0], PI).unwrap();
        assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(empirical_cf(&[], 1.0).is_err());
    }

    fn stable_samples(alpha: f64, beta: f64, m: usize, seed: u64) -> Vec<f64> {
        let p = StableParams::new(alpha, 1.0, beta, 0.0).unwrap();
        let mut rng = RngSeed::new(seed, 0).stream();
        (0..m).map(|_| sample_stable(&mut rng, &p)).collect()
    }

    #[test]
    fn shape_test_accepts_its_own_law() {
        let xs = stable_samples(1.5, 1.0, 100_000, 1);
        let r = cf_shape_test(&xs, 1.5, 1.0, &t_grid()).unwrap();
        assert!(r.max_abs_gap < 0.02, "gap {}", r.max_abs_gap);
        assert!((r.fitted_scale - 1.0).abs() < 0.02);
        assert!(r.empirical.iter().all(|z| z.norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn shape_test_rejects_gaussian_and_wrong_sign() {
        let mut rng = RngSeed::new(2, 0).stream();
        let g: Vec<f64> = (0..100_000)
            .map(|_| normal(&mut rng))
            .collect();
        assert!(cf_shape_test(&g, 1.5, 1.0, &t_grid()).unwrap().max_abs_gap > 0.1);

        let neg: Vec<f64> = stable_samples(1.5, 1.0, 100_000, 3).iter().map(|x| -x).collect();
        let minus = cf_shape_test(&neg, 1.5, -1.0, &t_grid()).unwrap().max_abs_gap;
        let plus = cf_shape_test(&neg, 1.5, 1.0, &t_grid()).unwrap().max_abs_gap;
        assert!(minus < 0.02 && plus > 0.1, "minus {minus} plus {plus}");
    }

    #[test]
    fn shape_test_reports_underflow() {
        let xs = vec![1e-9; 1000];
        assert!(matches!(cf_shape_test(&xs, 1.5, 1.0, &[0.1, 0.2]), Err(Error::Underflow(_))));
        assert!(cf_shape_test(&xs, 1.5, 1.0, &[0.0]).is_err());
    }

    #[test]
    fn ks_on_own_law_passes_at_the_99_percent_rate() {
        let m = 10_000;
        let reps = 200;
        let mut passes = 0;
        for r in 0..reps {
            let mut rng = RngSeed::new(4, r).stream();
            let xs: Vec<f64> = (0..m).map(|_| 2f64.sqrt() * normal(&mut rng)).collect();
            // α = 2 stable with σ = 1 is N(0, 2)
            let rep = ks_test(&xs, |x| Ok(0.5 * libm::erfc(-x / 2.0)), "normal").unwrap();
            passes += usize::from(rep.passed());
        }
        assert!(passes as f64 >= 0.97 * reps as f64, "{passes}/{reps}");
    }

    #[test]
    fn ks_examples() {
        let c = vec![0.3; 500];
        assert!(ks_test(&c, |x| Ok(0.5 * libm::erfc(-x / 2f64.sqrt())), "normal").unwrap().statistic >= 0.5);
        assert!(ks_test(&c[..50], |_| Ok(0.5), "x").is_err());

        let xs = stable_samples(1.5, 1.0, 2000, 5);
        let p = StableParams::totally_skewed(1.5, 1.0).unwrap();
        let d1 = ks_test(&xs, |x| stable_cdf(&p, x, 1e-9), "stable").unwrap().statistic;
        let ys: Vec<f64> = xs.iter().map(|x| libm::exp(*x / 3.0)).collect();
        let d2 = ks_test(&ys, |y| stable_cdf(&p, 3.0 * libm::log(y), 1e-9), "stable").unwrap().statistic;
        assert!((d1 - d2).abs() < 1e-9);
    }

    #[test]
    fn two_sample_ks_examples() {
        let a = stable_samples(1.5, 1.0, 5000, 6);
        let b = stable_samples(1.5, 1.0, 5000, 7);
        let r = two_sample_ks(&a, &b, "same").unwrap();
        assert!(r.passed(), "{}", r.statistic);
        let shifted: Vec<f64> = b.iter().map(|x| x + 1.0).collect();
        assert!(!two_sample_ks(&a, &shifted, "shift").unwrap().passed());
        assert_eq!(two_sample_ks(&a, &a, "self").unwrap().statistic, 0.0);
        assert_eq!(two_sample_ks(&[0.0, 1.0], &[2.0, 3.0], "apart").unwrap().statistic, 1.0);
    }

    #[test]
    fn poisson_means_for_pareto_rows() {
        let tail = TailModel::pareto(1.5, 1.0).unwrap();
        let rs = [0.5, 1.0, 2.0];
        let rep = poisson_exceedance_test(
            |r| row_exceedance_counts(&mut RngSeed::new(8, r).stream(), 1000, &tail, &rs),
            1000,
            &rs,
            1.5,
            3000,
        )
        .unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!((rep.rows[2].expected - 0.353_553_390_593_273_8).abs() < 1e-15);
        assert!((rep.rows[0].expected - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn isotonic_fit_pools_violators() {
        assert_eq!(isotonic_fit(&[1.0, 3.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(isotonic_fit(&[3.0, 2.0, 1.0]), vec![2.0, 2.0, 2.0]);
        assert_eq!(isotonic_fit(&[0.0, 0.5]), vec![0.0, 0.5]);
    }

    #[test]
    fn exact_truncated_variance_has_the_small_epsilon_slope() {
        // n a_n^{-2} E[z² 1{z ≤ a_n ε}] ≈ α/(2−α) ε^{2−α} once a_n ε ≫ x_m and the mean term is small
        let tail = TailModel::pareto(1.3, 1.0).unwrap();
        let n = 100_000_000;
        let v1 = truncated_variance(&tail, n, 0.05).unwrap();
        let v2 = truncated_variance(&tail, n, 0.1).unwrap();
        let slope = libm::log(v2 / v1) / libm::log(2.0);
        assert!((slope - 0.7).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn negligibility_reduction() {
        let tail = TailModel::pareto(1.5, 1.0).unwrap();
        let eps = [0.05, 0.1, 0.2, 0.4];
        let n = 2000;
        let curve = negligibility_curve(
            |r| crate::models::partial_sum_truncated_stats(&mut RngSeed::new(9, r).stream(), n, &tail, &eps),
            &eps,
            0.5,
            n,
            2000,
        )
        .unwrap();
        assert!(curve.isotonic_residual < 0.02);
        assert!(curve.exceed_prob.iter().all(|p| (0.0..=1.0).contains(p)));
        let big = negligibility_curve(
            |r| crate::models::partial_sum_truncated_stats(&mut RngSeed::new(9, r).stream(), n, &tail, &eps),
            &eps,
            10.0,
            n,
            200,
        )
        .unwrap();
        assert!(big.exceed_prob.iter().all(|&p| p == 0.0));
        assert!(negligibility_from_stats(&[], &[0.2, 0.1], 1.0, n).is_err());
    }

    #[test]
    fn counterexample_fixtures() {
        let rep = counterexample_suite().unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.get("levy").unwrap().statistic <= 0.007 + 1e-9);
        assert_eq!(rep.get("j1_counterexample").unwrap().statistic, 0.5);
        // the mean bump has height 1/2 at every n
        assert_eq!(rep.get("m1_counterexample").unwrap().statistic, 0.5);
        assert!(m1_sup_norms(10_000).iter().all(|&s| s == 0.5));
    }
}
