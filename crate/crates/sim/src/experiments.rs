//! One pipeline per experiment kind: simulate replicates in parallel, reduce
//! them in replicate order, write CSVs and summary rows.

use std::path::{Path, PathBuf};
use std::time::Instant;

use heavytail_core::models::{
    empirical_process_with, exceedance_process, partial_sum_array, partial_sum_process, partial_sum_truncated_stats,
    steady_state_cdf, truncated_sum, LepageSeries, ParetoSumModel, RenewalRewardConfig, RewardLaw, Side, TruncatedStat,
    TruncationCentering,
};
use heavytail_core::special::{c_alpha, c_alpha_pow, gamma_frac_moment};
use heavytail_core::stable::stable_cdf;
use heavytail_core::verify::{
    cf_shape_test, counterexample_suite, ks_test, negligibility_from_stats, poisson_report, row_exceedance_counts,
    truncated_variance, two_sample_ks, CfComparisonReport, KsReport,
};
use heavytail_core::{RngSeed, TailKind, TailModel};

use crate::config::{Experiment, ExperimentConfig, RowModel, TailFamily};
use crate::output::{fmt_f64, write_step_function, write_table};
use crate::report::{write_summary, ReportBundle, RunError, SummaryRow};
use crate::runner::try_run_replicates;

// Stream families, one per model, so that models compared within one run
// never share random numbers.
const PARTIAL_SUM: u64 = 1;
const PARETO_SUM: u64 = 2;
const LEPAGE: u64 = 3;
const RENEWAL: u64 = 4;
const EXCEEDANCE: u64 = 5;
const NEGLIGIBILITY: u64 = 6;

/// Accuracy requested from the stable CDF in KS comparisons.
const CDF_TOL: f64 = 1e-8;

pub fn tail_model(cfg: &ExperimentConfig) -> Result<TailModel, heavytail_core::Error> {
    let kind = match cfg.tail {
        TailFamily::Pareto => TailKind::Pareto,
        TailFamily::Lomax => TailKind::ParetoShifted,
    };
    TailModel::new(kind, cfg.alpha, cfg.x_m)
}

/// `(family seed, replicate)` stream for one model.
pub fn stream(seed: u64, family: u64, replicate: u64) -> heavytail_core::rng::Stream {
    RngSeed::new(RngSeed::family(seed, family), replicate).stream()
}

struct Run<'a> {
    cfg: &'a ExperimentConfig,
    workers: usize,
    hash: String,
    summary: Vec<SummaryRow>,
    artifacts: Vec<PathBuf>,
}

impl Run<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.cfg.output_dir.join(name)
    }

    fn io<T>(&self, path: &Path, r: std::io::Result<T>) -> Result<T, RunError> {
        r.map_err(|source| RunError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    fn table<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), RunError>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let p = self.path(name);
        self.io(&p, write_table(&p, &self.hash, header, rows))?;
        self.artifacts.push(p);
        Ok(())
    }

    fn step(&mut self, name: &str, f: &heavytail_core::StepFunction) -> Result<(), RunError> {
        let p = self.path(name);
        self.io(&p, write_step_function(&p, &self.hash, f))?;
        self.artifacts.push(p);
        Ok(())
    }

    fn replicates<T, F>(&self, f: F) -> Result<Vec<T>, RunError>
    where
        T: Send,
        F: Fn(u64) -> Result<T, heavytail_core::Error> + Sync + Send,
    {
        Ok(try_run_replicates(self.workers, self.cfg.replicates, f)??)
    }

    fn row(&mut self, r: SummaryRow) {
        self.summary.push(r);
    }
}

/// Runs with one worker per available core.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ReportBundle, RunError> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    run_experiment_with(cfg, workers)
}

/// Validates `cfg`, runs its pipeline on `workers` threads and writes every
/// artifact into `cfg.output_dir`.
pub fn run_experiment_with(cfg: &ExperimentConfig, workers: usize) -> Result<ReportBundle, RunError> {
    cfg.validate()?;
    let start = Instant::now();
    std::fs::create_dir_all(&cfg.output_dir).map_err(|source| RunError::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;
    let mut run = Run {
        cfg,
        workers,
        hash: cfg.hash(),
        summary: Vec::new(),
        artifacts: Vec::new(),
    };
    let config_path = run.path("config.txt");
    run.io(&config_path, std::fs::write(&config_path, cfg.serialize()))?;
    match cfg.experiment {
        Experiment::Constants => constants(&mut run)?,
        Experiment::PartialSum => partial_sum(&mut run)?,
        Experiment::ParetoSum => pareto_sum(&mut run)?,
        Experiment::Lepage => lepage(&mut run)?,
        Experiment::RenewalReward => renewal(&mut run)?,
        Experiment::Exceedance => exceedance(&mut run)?,
        Experiment::Negligibility => negligibility(&mut run)?,
        Experiment::Counterexamples => counterexamples(&mut run)?,
    }
    let summary_path = run.path("summary.csv");
    run.io(&summary_path, write_summary(&summary_path, &run.hash, &run.summary))?;
    run.artifacts.push(summary_path);
    Ok(ReportBundle {
        summary: run.summary,
        artifacts: run.artifacts,
        config_echo: cfg.clone(),
        wall_time: start.elapsed(),
    })
}

fn constants(run: &mut Run) -> Result<(), RunError> {
    let a = run.cfg.alpha;
    let pow = c_alpha_pow(a)?;
    let c = c_alpha(a)?;
    let g1 = gamma_frac_moment(1, a)?;
    // independent evaluation through statrs
    let pow_ref = statrs::function::gamma::gamma(1.0 - a) * (std::f64::consts::FRAC_PI_2 * a).cos();
    let g1_ref = statrs::function::gamma::gamma(1.0 - 1.0 / a);
    run.row(SummaryRow::value("c_alpha_pow", pow));
    run.row(SummaryRow::value("c_alpha", c));
    run.row(SummaryRow::value("gamma_frac_moment_1", g1));
    run.row(SummaryRow::check("c_alpha_pow_vs_reference", (pow - pow_ref).abs(), 1e-10, (pow - pow_ref).abs() <= 1e-10));
    run.row(SummaryRow::check("gamma_frac_moment_1_vs_reference", (g1 - g1_ref).abs(), 1e-8, (g1 - g1_ref).abs() <= 1e-8));
    run.table(
        "constants.csv",
        &["name", "value"],
        [("c_alpha_pow", pow), ("c_alpha", c), ("gamma_frac_moment_1", g1)]
            .map(|(k, v)| [k.to_string(), fmt_f64(v)]),
    )
}

/// KS of `samples` against `S_α(σ, β, 0)`, with CDF values computed in parallel.
pub fn ks_against_stable(
    samples: &[f64],
    alpha: f64,
    beta: f64,
    sigma: f64,
    workers: usize,
) -> Result<KsReport, RunError> {
    let law = heavytail_core::StableParams::new(alpha, sigma, beta, 0.0)?;
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    let values = try_run_replicates(workers, xs.len() as u64, |i| stable_cdf(&law, xs[i as usize], CDF_TOL))??;
    let lookup = |x: f64| {
        let i = xs.partition_point(|&v| v < x);
        Ok(values[i])
    };
    Ok(ks_test(&xs, lookup, "stable")?)
}

fn column(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

fn time_label(t: f64) -> String {
    format!("t={t}")
}

fn write_marginals(run: &mut Run, name: &str, values: &[Vec<f64>]) -> Result<(), RunError> {
    let mut header = vec![String::from("replicate")];
    header.extend(run.cfg.eval_times.iter().map(|&t| time_label(t)));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = values
        .iter()
        .enumerate()
        .map(|(r, v)| std::iter::once(r.to_string()).chain(v.iter().map(|x| fmt_f64(*x))).collect())
        .collect();
    run.table(name, &header, rows)
}

fn write_cf(run: &mut Run, name: &str, rep: &CfComparisonReport) -> Result<(), RunError> {
    run.table(
        name,
        &["t", "empirical_re", "empirical_im", "model_re", "model_im"],
        rep.t_grid.iter().zip(&rep.empirical).zip(&rep.model).map(|((t, e), m)| {
            [fmt_f64(*t), fmt_f64(e.re), fmt_f64(e.im), fmt_f64(m.re), fmt_f64(m.im)]
        }),
    )
}

/// Shape test and KS at the last evaluation time, against the totally
/// right-skewed stable law.
fn stable_marginal_checks(run: &mut Run, prefix: &str, samples: &[f64]) -> Result<(), RunError> {
    let cfg = run.cfg;
    let cf = cf_shape_test(samples, cfg.alpha, 1.0, &cfg.t_grid)?;
    write_cf(run, &format!("{prefix}_cf.csv"), &cf)?;
    run.row(SummaryRow::value(format!("{prefix}_fitted_scale"), cf.fitted_scale));
    run.row(SummaryRow::below(format!("{prefix}_cf_max_gap"), cf.max_abs_gap, cfg.cf_threshold));
    let ks = ks_against_stable(samples, cfg.alpha, 1.0, cf.fitted_scale, run.workers)?;
    run.row(SummaryRow::below(format!("{prefix}_ks_fitted_stable"), ks.statistic, cfg.ks_threshold));
    Ok(())
}

fn partial_sum_marginals(run: &Run) -> Result<Vec<Vec<f64>>, RunError> {
    let cfg = run.cfg;
    let tail = tail_model(cfg)?;
    run.replicates(|r| {
        let s = partial_sum_process(&mut stream(cfg.seed, PARTIAL_SUM, r), cfg.n as usize, &tail)?;
        cfg.eval_times.iter().map(|&t| s.evaluate(t)).collect()
    })
}

fn partial_sum(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    let tail = tail_model(cfg)?;
    let first = partial_sum_process(&mut stream(cfg.seed, PARTIAL_SUM, 0), cfg.n as usize, &tail)?;
    run.step("path_0.csv", &first)?;
    let values = partial_sum_marginals(run)?;
    write_marginals(run, "marginals.csv", &values)?;
    let last = column(&values, cfg.eval_times.len() - 1);
    stable_marginal_checks(run, "partial_sum", &last)
}

fn pareto_sum(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    let model = ParetoSumModel::new(cfg.spectral.sampler(), tail_model(cfg)?, cfg.n as usize)?;
    let first = model.sample(&mut stream(cfg.seed, PARETO_SUM, 0));
    for (c, comp) in first.components().iter().enumerate() {
        run.step(&format!("path_0_component_{c}.csv"), comp)?;
    }
    let values = run.replicates(|r| {
        let s = model.sample(&mut stream(cfg.seed, PARETO_SUM, r));
        cfg.eval_times.iter().map(|&t| s.component(0).evaluate(t)).collect()
    })?;
    write_marginals(run, "marginals.csv", &values)?;
    for (j, &t) in cfg.eval_times.iter().enumerate() {
        let (m, se) = mean_and_se(&column(&values, j));
        let z = if se > 0.0 { m.abs() / se } else { 0.0 };
        run.row(SummaryRow::check(format!("pareto_sum_centering_{}", time_label(t)), z, 3.0, z <= 3.0));
    }
    let last = column(&values, cfg.eval_times.len() - 1);
    stable_marginal_checks(run, "pareto_sum", &last)?;
    let reference = partial_sum_marginals(run)?;
    let ks = two_sample_ks(&last, &column(&reference, cfg.eval_times.len() - 1), "partial_sum")?;
    run.row(SummaryRow::below("pareto_vs_partial_sum_ks", ks.statistic, cfg.ks_threshold));
    Ok(())
}

fn lepage(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    let series = LepageSeries::new(cfg.alpha, cfg.spectral.sampler(), cfg.terms as usize, cfg.tail_tol)?;
    run.row(SummaryRow::check("lepage_tail_bound", series.tail_bound(), cfg.tail_tol, true));
    let first = series.sample(&mut stream(cfg.seed, LEPAGE, 0));
    for (c, comp) in first.components().iter().enumerate() {
        run.step(&format!("path_0_component_{c}.csv"), comp)?;
    }
    let values = run.replicates(|r| series.sample_at(&mut stream(cfg.seed, LEPAGE, r), &cfg.eval_times))?;
    write_marginals(run, "marginals.csv", &values)?;
    let reference = partial_sum_marginals(run)?;
    write_marginals(run, "partial_sum_marginals.csv", &reference)?;
    for (j, &t) in cfg.eval_times.iter().enumerate() {
        let ks = two_sample_ks(&column(&values, j), &column(&reference, j), "partial_sum")?;
        run.row(SummaryRow::below(format!("lepage_vs_partial_sum_ks_{}", time_label(t)), ks.statistic, cfg.ks_threshold));
    }
    Ok(())
}

/// `E[φ_+^α] / E|φ|^α` for `φ = 1{W ≤ w} − F_0(w)` with `P(W ≤ w) = F_0(w)`.
pub fn positive_mass_fraction(f0: f64, alpha: f64) -> f64 {
    let plus = f0 * (1.0 - f0).powf(alpha);
    let minus = (1.0 - f0) * f0.powf(alpha);
    plus / (plus + minus)
}

fn renewal_config(cfg: &ExperimentConfig) -> Result<RenewalRewardConfig, RunError> {
    Ok(RenewalRewardConfig::new(
        tail_model(cfg)?,
        RewardLaw::Exponential { mean: cfg.reward_mean },
        cfg.horizon,
        cfg.w_grid.clone(),
    )?)
}

fn renewal(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    let rc = renewal_config(cfg)?;
    let f0 = rc.steady_state()?;
    let identity_gap = cfg
        .w_grid
        .iter()
        .zip(&f0)
        .map(|(&w, f)| Ok((steady_state_cdf(&rc, w)? - f).abs().max((rc.reward.cdf(w) - f).abs())))
        .collect::<Result<Vec<f64>, heavytail_core::Error>>()?
        .into_iter()
        .fold(0.0, f64::max);
    run.row(SummaryRow::check("steady_state_equals_reward_cdf", identity_gap, 0.0, identity_gap == 0.0));
    let first = heavytail_core::models::renewal_reward_path(&mut stream(cfg.seed, RENEWAL, 0), &rc)?;
    run.step("trajectory_0.csv", &first.trajectory)?;
    let values = run.replicates(|r| empirical_process_with(&mut stream(cfg.seed, RENEWAL, r), &rc, &f0))?;
    let header: Vec<String> = std::iter::once(String::from("replicate"))
        .chain(cfg.w_grid.iter().map(|w| format!("w={w}")))
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    run.table(
        "empirical_process.csv",
        &header,
        values
            .iter()
            .enumerate()
            .map(|(r, v)| std::iter::once(r.to_string()).chain(v.iter().map(|x| fmt_f64(*x))).collect::<Vec<_>>()),
    )?;
    let mut rows = Vec::new();
    for (j, &w) in cfg.w_grid.iter().enumerate() {
        let xs = column(&values, j);
        let (m, se) = mean_and_se(&xs);
        let z = if se > 0.0 { m.abs() / se } else { 0.0 };
        run.row(SummaryRow::check(format!("renewal_centering_w={w}"), z, 3.0, z <= 3.0));
        let p = positive_mass_fraction(f0[j], cfg.alpha);
        let beta = 2.0 * p - 1.0;
        let cf = cf_shape_test(&xs, cfg.alpha, beta, &cfg.t_grid)?;
        let literal = cf_shape_test(&xs, cfg.alpha, p, &cfg.t_grid)?;
        run.row(SummaryRow::below(format!("renewal_cf_max_gap_w={w}"), cf.max_abs_gap, cfg.cf_threshold));
        rows.push([w, f0[j], p, beta, cf.fitted_scale, cf.max_abs_gap, literal.max_abs_gap].map(fmt_f64));
    }
    run.table(
        "renewal_cf.csv",
        &["w", "f0", "positive_fraction", "beta", "fitted_scale", "max_gap", "max_gap_beta_equal_fraction"],
        rows,
    )
}

fn exceedance(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    let tail = tail_model(cfg)?;
    let n = cfg.n as usize;
    let a_n = tail.a_n(cfg.n)?;
    let spectral = cfg.spectral.sampler();
    let counts = run.replicates(|r| {
        let mut rng = stream(cfg.seed, EXCEEDANCE, r);
        match cfg.model {
            RowModel::PartialSum => row_exceedance_counts(&mut rng, n, &tail, &cfg.r_grid),
            RowModel::ParetoSum => {
                let mut c = vec![0usize; cfg.r_grid.len()];
                for _ in 0..n {
                    let radius = tail.sample(&mut rng) / a_n;
                    let _ = spectral.sample(&mut rng);
                    for (k, &level) in c.iter_mut().zip(&cfg.r_grid) {
                        *k += usize::from(radius > level);
                    }
                }
                Ok(c)
            }
        }
    })?;
    let report = poisson_report(&counts, &cfg.r_grid, cfg.alpha, n)?;
    run.table(
        "exceedance_counts.csv",
        &["r", "expected", "mean", "variance", "std_error", "dispersion"],
        report.rows.iter().map(|row| {
            [row.r, row.expected, row.mean, row.variance, row.std_error, row.dispersion()].map(fmt_f64)
        }),
    )?;
    for row in &report.rows {
        let z = (row.mean - row.expected).abs() / row.std_error;
        run.row(SummaryRow::check(format!("exceedance_mean_r={}", row.r), z, 3.0, z <= 3.0));
        let d = row.dispersion();
        run.row(SummaryRow::check(
            format!("exceedance_dispersion_r={}", row.r),
            d,
            1.1,
            (0.9..=1.1).contains(&d),
        ));
    }
    // replicate 0 as a point process: the points above the smallest radius
    let mut rng = stream(cfg.seed, EXCEEDANCE, 0);
    let row = match cfg.model {
        RowModel::PartialSum => partial_sum_array(&mut rng, n, &tail, cfg.seed)?,
        RowModel::ParetoSum => ParetoSumModel::new(spectral.clone(), tail, n)?.sample_array(&mut rng, cfg.seed)?,
    };
    let points = exceedance_process(&row, a_n)?;
    let dir = run.path("exceedance_paths");
    run.io(&dir, std::fs::create_dir_all(&dir))?;
    let mut listing = Vec::new();
    for (k, p) in points.points.iter().enumerate().filter(|(_, p)| p.radius > cfg.r_grid[0]) {
        let mut files = Vec::new();
        for (c, comp) in p.spectral.components().iter().enumerate() {
            let name = format!("exceedance_paths/point_{k}_component_{c}.csv");
            run.step(&name, comp)?;
            files.push(name);
        }
        listing.push([fmt_f64(p.radius), files.join(";")]);
    }
    run.table("exceedances.csv", &["radius", "path_file"], listing)
}

fn pareto_truncated_stats(
    model: &ParetoSumModel,
    centering: &TruncationCentering,
    rng: &mut heavytail_core::rng::Stream,
    eps: &[f64],
) -> Result<Vec<TruncatedStat>, heavytail_core::Error> {
    let row = model.sample_array(rng, 0)?;
    eps.iter()
        .map(|&e| {
            let s = truncated_sum(&row, model.a_n(), e, Side::Below, centering)?;
            Ok(TruncatedStat {
                value_at_one: s.component(0).evaluate(1.0)?,
                sup_norm: s.sup_norm(),
            })
        })
        .collect()
}

fn negligibility(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    let tail = tail_model(cfg)?;
    let n = cfg.n as usize;
    let a_n = tail.a_n(cfg.n)?;
    let lowest = a_n * cfg.epsilons[0];
    run.row(SummaryRow::check("truncation_above_support", lowest, tail.support_min(), lowest > tail.support_min()));
    let stats = match cfg.model {
        RowModel::PartialSum => run.replicates(|r| {
            partial_sum_truncated_stats(&mut stream(cfg.seed, NEGLIGIBILITY, r), n, &tail, &cfg.epsilons)
        })?,
        RowModel::ParetoSum => {
            let model = ParetoSumModel::new(cfg.spectral.sampler(), tail, n)?;
            let centering = TruncationCentering::ParetoProcess {
                tail,
                spectral_mean: model.mean_step().clone(),
            };
            run.replicates(|r| {
                pareto_truncated_stats(&model, &centering, &mut stream(cfg.seed, NEGLIGIBILITY, r), &cfg.epsilons)
            })?
        }
    };
    let curve = negligibility_from_stats(&stats, &cfg.epsilons, cfg.eta, n)?;
    let exact = cfg
        .epsilons
        .iter()
        .map(|&e| truncated_variance(&tail, n, e))
        .collect::<Result<Vec<_>, _>>()?;
    let lx: Vec<f64> = cfg.epsilons.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = exact.iter().map(|v| v.ln()).collect();
    let exact_slope = heavytail_core::verify::ols_slope(&lx, &ly);
    run.table(
        "negligibility.csv",
        &["epsilon", "exceed_prob", "variance", "exact_variance"],
        (0..cfg.epsilons.len()).map(|j| {
            [curve.epsilons[j], curve.exceed_prob[j], curve.variances[j], exact[j]].map(fmt_f64)
        }),
    )?;
    let target = 2.0 - cfg.alpha;
    let dev = (curve.fitted_slope - target).abs();
    run.row(SummaryRow::value("variance_slope", curve.fitted_slope));
    run.row(SummaryRow::check("variance_slope_deviation", dev, cfg.slope_tolerance, dev <= cfg.slope_tolerance));
    run.row(SummaryRow::value("variance_slope_exact_finite_n", exact_slope));
    run.row(SummaryRow::check(
        "exceed_prob_isotonic_residual",
        curve.isotonic_residual,
        cfg.isotonic_tolerance,
        curve.isotonic_residual <= cfg.isotonic_tolerance,
    ));
    Ok(())
}

fn counterexamples(run: &mut Run) -> Result<(), RunError> {
    let suite = counterexample_suite()?;
    for f in &suite.fixtures {
        run.row(SummaryRow::check(f.name, f.statistic, f.threshold, f.pass));
    }
    run.table(
        "counterexamples.csv",
        &["fixture", "pass", "statistic", "threshold", "detail"],
        suite.fixtures.iter().map(|f| {
            [f.name.to_string(), f.pass.to_string(), fmt_f64(f.statistic), fmt_f64(f.threshold), f.detail.clone()]
        }),
    )
}

/// A sample of `S_n(1)` values, replicate `r` on stream `(family(seed, 1), r)`.
pub fn partial_sum_endpoint_sample(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<f64>, RunError> {
    let tail = tail_model(cfg)?;
    Ok(try_run_replicates(workers, cfg.replicates, |r| {
        partial_sum_process(&mut stream(cfg.seed, PARTIAL_SUM, r), cfg.n as usize, &tail)?.evaluate(1.0)
    })??)
}

