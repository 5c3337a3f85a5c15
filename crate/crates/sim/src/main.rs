use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use heavytail::{emit_reports, exit, run_experiment_with, Experiment, ExperimentConfig, RowModel};

#[derive(Parser)]
#[command(name = "heavytail", version, about = "Heavy-tailed functional limit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the stable-limit constants for `alpha`.
    Constants(Common),
    /// Simulate partial sums, Pareto sums or renewal-reward processes.
    Simulate(Common),
    /// Compare the LePage series against partial sums.
    Lepage(Common),
    /// Poisson exceedance counts of the row array.
    Exceedances(Common),
    /// Variance and exceedance probability of truncated sums.
    Negligibility(Common),
    /// Run the experiment named in the config as is.
    Verify(Common),
    /// Deterministic fixtures for the Skorokhod topologies.
    Counterexamples(Common),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra `key=value` overrides, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn load(common: &Common) -> Result<ExperimentConfig, i32> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            eprintln!("error: cannot read {}: {e}", path.display());
            exit::IO_ERROR
        })?;
        cfg.apply(&text).map_err(|e| {
            eprintln!("error: {e}");
            exit::INVALID_CONFIG
        })?;
    }
    for kv in &common.set {
        let Some((k, v)) = kv.split_once('=') else {
            eprintln!("error: --set expects key=value, got {kv:?}");
            return Err(exit::INVALID_CONFIG);
        };
        cfg.set(k.trim(), v.trim()).map_err(|why| {
            eprintln!("error: {}: {why}", k.trim());
            exit::INVALID_CONFIG
        })?;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn run(command: Command) -> i32 {
    let (common, fixed) = match &command {
        Command::Constants(c) => (c, Some(Experiment::Constants)),
        Command::Simulate(c) => (c, None),
        Command::Lepage(c) => (c, Some(Experiment::Lepage)),
        Command::Exceedances(c) => (c, Some(Experiment::Exceedance)),
        Command::Negligibility(c) => (c, Some(Experiment::Negligibility)),
        Command::Verify(c) => (c, None),
        Command::Counterexamples(c) => (c, Some(Experiment::Counterexamples)),
    };
    let mut cfg = match load(common) {
        Ok(cfg) => cfg,
        Err(code) => return code,
    };
    if let Some(e) = fixed {
        cfg.experiment = e;
    } else if matches!(command, Command::Simulate(_))
        && !matches!(cfg.experiment, Experiment::PartialSum | Experiment::ParetoSum | Experiment::RenewalReward)
    {
        cfg.experiment = match cfg.model {
            RowModel::PartialSum => Experiment::PartialSum,
            RowModel::ParetoSum => Experiment::ParetoSum,
        };
    }
    let workers = common
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    match run_experiment_with(&cfg, workers) {
        Ok(bundle) => emit_reports(&bundle),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli.command) as u8)
}
