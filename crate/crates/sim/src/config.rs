//! Flat `key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Lists are comma
//! separated. Every key has a default, so a file only needs the keys it
//! changes; unknown keys are an error.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    PartialSum,
    ParetoSum,
    Lepage,
    RenewalReward,
    Exceedance,
    Negligibility,
    Counterexamples,
    Constants,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Self::PartialSum,
        Self::ParetoSum,
        Self::Lepage,
        Self::RenewalReward,
        Self::Exceedance,
        Self::Negligibility,
        Self::Counterexamples,
        Self::Constants,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::PartialSum => "partial_sum",
            Self::ParetoSum => "pareto_sum",
            Self::Lepage => "lepage",
            Self::RenewalReward => "renewal_reward",
            Self::Exceedance => "exceedance",
            Self::Negligibility => "negligibility",
            Self::Counterexamples => "counterexamples",
            Self::Constants => "constants",
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment {s:?}"))
    }
}

/// Which row model feeds the exceedance and negligibility experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowModel {
    PartialSum,
    ParetoSum,
}

impl RowModel {
    pub fn name(self) -> &'static str {
        match self {
            Self::PartialSum => "partial_sum",
            Self::ParetoSum => "pareto_sum",
        }
    }
}

impl FromStr for RowModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "partial_sum" => Ok(Self::PartialSum),
            "pareto_sum" => Ok(Self::ParetoSum),
            _ => Err(format!("unknown model {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spectral {
    Indicator,
    RenewalPair,
    ConstantOne,
}

impl Spectral {
    pub fn name(self) -> &'static str {
        match self {
            Self::Indicator => "indicator",
            Self::RenewalPair => "renewal_pair",
            Self::ConstantOne => "constant_one",
        }
    }

    pub fn sampler(self) -> heavytail_core::spectral::SpectralSampler {
        use heavytail_core::spectral::SpectralSampler;
        match self {
            Self::Indicator => SpectralSampler::indicator(),
            Self::RenewalPair => SpectralSampler::renewal_pair(),
            Self::ConstantOne => SpectralSampler::constant_one(),
        }
    }
}

impl FromStr for Spectral {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "indicator" => Ok(Self::Indicator),
            "renewal_pair" => Ok(Self::RenewalPair),
            "constant_one" => Ok(Self::ConstantOne),
            _ => Err(format!("unknown spectral sampler {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailFamily {
    Pareto,
    Lomax,
}

impl TailFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pareto => "pareto",
            Self::Lomax => "lomax",
        }
    }
}

impl FromStr for TailFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pareto" => Ok(Self::Pareto),
            "lomax" => Ok(Self::Lomax),
            _ => Err(format!("unknown tail family {s:?}")),
        }
    }
}

/// A fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub model: RowModel,
    pub alpha: f64,
    pub tail: TailFamily,
    pub x_m: f64,
    pub n: u64,
    pub horizon: f64,
    pub replicates: u64,
    pub seed: u64,
    pub spectral: Spectral,
    pub terms: u64,
    pub tail_tol: f64,
    pub epsilons: Vec<f64>,
    pub eta: f64,
    pub eval_times: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub w_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub reward_mean: f64,
    pub ks_threshold: f64,
    pub cf_threshold: f64,
    pub slope_tolerance: f64,
    pub isotonic_tolerance: f64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::PartialSum,
            model: RowModel::PartialSum,
            alpha: 1.5,
            tail: TailFamily::Pareto,
            x_m: 1.0,
            n: 1000,
            horizon: 1000.0,
            replicates: 1000,
            seed: 1,
            spectral: Spectral::Indicator,
            terms: 10_000,
            tail_tol: 1.0,
            epsilons: vec![0.05, 0.1, 0.2, 0.4],
            eta: 0.5,
            eval_times: vec![0.25, 0.5, 0.75, 1.0],
            r_grid: vec![0.5, 1.0, 2.0],
            w_grid: vec![(4.0f64 / 3.0).ln(), std::f64::consts::LN_2, 4.0f64.ln()],
            t_grid: (1..=10).map(|k| 0.2 * k as f64).collect(),
            reward_mean: 1.0,
            ks_threshold: 0.02,
            cf_threshold: 0.02,
            slope_tolerance: 0.1,
            isotonic_tolerance: 0.02,
            output_dir: PathBuf::from("out"),
        }
    }
}

/// Offending keys with the reason each was rejected.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub problems: Vec<(String, String)>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<&str> = self.problems.iter().map(|(k, _)| k.as_str()).collect();
        write!(f, "invalid configuration keys: {}", keys.join(", "))?;
        for (k, why) in &self.problems {
            write!(f, "\n  {k}: {why}")?;
        }
        Ok(())
    }
}

const KEYS: [&str; 24] = [
    "experiment",
    "model",
    "alpha",
    "tail",
    "x_m",
    "n",
    "T",
    "replicates",
    "seed",
    "spectral",
    "K",
    "tail_tol",
    "epsilons",
    "eta",
    "eval_times",
    "r_grid",
    "w_grid",
    "t_grid",
    "reward_mean",
    "ks_threshold",
    "cf_threshold",
    "slope_tolerance",
    "isotonic_tolerance",
    "output_dir",
];

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

fn parse_num<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    v.parse::<T>().map_err(|e| format!("{v:?}: {e}"))
}

impl ExperimentConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key {
            "experiment" => self.experiment = v.parse()?,
            "model" => self.model = v.parse()?,
            "alpha" => self.alpha = parse_num(v)?,
            "tail" => self.tail = v.parse()?,
            "x_m" => self.x_m = parse_num(v)?,
            "n" => self.n = parse_num(v)?,
            "T" => self.horizon = parse_num(v)?,
            "replicates" => self.replicates = parse_num(v)?,
            "seed" => self.seed = parse_num(v)?,
            "spectral" => self.spectral = v.parse()?,
            "K" => self.terms = parse_num(v)?,
            "tail_tol" => self.tail_tol = parse_num(v)?,
            "epsilons" => self.epsilons = parse_list(v)?,
            "eta" => self.eta = parse_num(v)?,
            "eval_times" => self.eval_times = parse_list(v)?,
            "r_grid" => self.r_grid = parse_list(v)?,
            "w_grid" => self.w_grid = parse_list(v)?,
            "t_grid" => self.t_grid = parse_list(v)?,
            "reward_mean" => self.reward_mean = parse_num(v)?,
            "ks_threshold" => self.ks_threshold = parse_num(v)?,
            "cf_threshold" => self.cf_threshold = parse_num(v)?,
            "slope_tolerance" => self.slope_tolerance = parse_num(v)?,
            "isotonic_tolerance" => self.isotonic_tolerance = parse_num(v)?,
            "output_dir" => self.output_dir = PathBuf::from(v),
            _ => return Err(String::from("unknown key")),
        }
        Ok(())
    }

    /// The value of `key` in the form [`Self::set`] reads back.
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "experiment" => self.experiment.name().to_string(),
            "model" => self.model.name().to_string(),
            "alpha" => format!("{:?}", self.alpha),
            "tail" => self.tail.name().to_string(),
            "x_m" => format!("{:?}", self.x_m),
            "n" => self.n.to_string(),
            "T" => format!("{:?}", self.horizon),
            "replicates" => self.replicates.to_string(),
            "seed" => self.seed.to_string(),
            "spectral" => self.spectral.name().to_string(),
            "K" => self.terms.to_string(),
            "tail_tol" => format!("{:?}", self.tail_tol),
            "epsilons" => list(&self.epsilons),
            "eta" => format!("{:?}", self.eta),
            "eval_times" => list(&self.eval_times),
            "r_grid" => list(&self.r_grid),
            "w_grid" => list(&self.w_grid),
            "t_grid" => list(&self.t_grid),
            "reward_mean" => format!("{:?}", self.reward_mean),
            "ks_threshold" => format!("{:?}", self.ks_threshold),
            "cf_threshold" => format!("{:?}", self.cf_threshold),
            "slope_tolerance" => format!("{:?}", self.slope_tolerance),
            "isotonic_tolerance" => format!("{:?}", self.isotonic_tolerance),
            "output_dir" => self.output_dir.display().to_string(),
            _ => return None,
        })
    }

    /// Parses a config text on top of the defaults, then validates it.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies the assignments in `text` without validating the result.
    pub fn apply(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut problems = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                problems.push((format!("line {}", lineno + 1), String::from("expected key = value")));
                continue;
            };
            let k = k.trim();
            if let Err(why) = self.set(k, v) {
                problems.push((k.to_string(), why));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { problems })
        }
    }

    /// Every key, one per line, in a fixed order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for k in KEYS {
            let _ = writeln!(out, "{k} = {}", self.get(k).expect("known key"));
        }
        out
    }

    /// SHA-256 of the serialized config without `output_dir`, which does not
    /// affect results.
    pub fn hash(&self) -> String {
        let text: String = self
            .serialize()
            .lines()
            .filter(|l| !l.starts_with("output_dir"))
            .map(|l| format!("{l}\n"))
            .collect();
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Checks every numeric range before anything is sampled.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut bad: Vec<(String, String)> = Vec::new();
        let mut check = |ok: bool, key: &str, why: &str| {
            if !ok {
                bad.push((key.to_string(), why.to_string()));
            }
        };
        let positive = |x: f64| x > 0.0 && x.is_finite();
        let increasing = |xs: &[f64]| xs.windows(2).all(|w| w[0] < w[1]);
        check(self.alpha > 1.0 && self.alpha < 2.0, "alpha", "must lie in (1, 2)");
        check(positive(self.x_m), "x_m", "must be positive");
        check(self.n >= 1, "n", "must be >= 1");
        check(self.horizon >= 1.0 && self.horizon.is_finite(), "T", "must be >= 1");
        check(self.replicates >= 2, "replicates", "must be >= 2");
        check(self.terms >= 1, "K", "must be >= 1");
        check(positive(self.tail_tol), "tail_tol", "must be positive");
        check(
            self.epsilons.len() >= 2 && self.epsilons.iter().all(|&e| positive(e)) && increasing(&self.epsilons),
            "epsilons",
            "need at least two positive, strictly increasing levels",
        );
        check(positive(self.eta), "eta", "must be positive");
        check(
            !self.eval_times.is_empty() && self.eval_times.iter().all(|t| (0.0..=1.0).contains(t)) && increasing(&self.eval_times),
            "eval_times",
            "need increasing times in [0, 1]",
        );
        check(
            !self.r_grid.is_empty() && self.r_grid.iter().all(|&r| positive(r)) && increasing(&self.r_grid),
            "r_grid",
            "need increasing positive radii",
        );
        check(
            !self.w_grid.is_empty() && self.w_grid.iter().all(|w| w.is_finite()) && increasing(&self.w_grid),
            "w_grid",
            "need increasing finite rewards",
        );
        check(
            self.t_grid.iter().any(|&t| t != 0.0) && self.t_grid.iter().all(|t| t.is_finite()),
            "t_grid",
            "needs a nonzero finite point",
        );
        check(positive(self.reward_mean), "reward_mean", "must be positive");
        for (k, v) in [
            ("ks_threshold", self.ks_threshold),
            ("cf_threshold", self.cf_threshold),
            ("slope_tolerance", self.slope_tolerance),
            ("isotonic_tolerance", self.isotonic_tolerance),
        ] {
            check(positive(v), k, "must be positive");
        }
        check(!self.output_dir.as_os_str().is_empty(), "output_dir", "must not be empty");
        if bad.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { problems: bad })
        }
    }
}
