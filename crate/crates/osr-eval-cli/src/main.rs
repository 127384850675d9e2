//! Command-line front end for the osr-eval toolkit.

mod cli_error;
mod commands;
mod formats;
mod report;

use anyhow::anyhow;
use clap::{Parser, Subcommand, ValueEnum};

use cli_error::{CliError, CliResult};
use osr_eval::scores::BaseMetric;

/// Environment variable consulted when `--seed` is not given.
pub const SEED_ENV_VAR: &str = "OSR_EVAL_SEED";
const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseMetricFlag {
    BalancedAccuracy,
    Accuracy,
    F1,
}

impl From<BaseMetricFlag> for BaseMetric {
    fn from(flag: BaseMetricFlag) -> Self {
        match flag {
            BaseMetricFlag::BalancedAccuracy => BaseMetric::BalancedAccuracy,
            BaseMetricFlag::Accuracy => BaseMetric::Accuracy,
            BaseMetricFlag::F1 => BaseMetric::F1Binary,
        }
    }
}

/// Resolves the master seed: flag, then $OSR_EVAL_SEED, then 42.
pub fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(value) => value.trim().parse().map_err(|_| {
            CliError::schema(anyhow!("{SEED_ENV_VAR}=`{value}` is not a valid seed"))
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "osr-eval",
    version,
    about = "Open set recognition evaluation under known/unknown class imbalance",
    long_about = "Scores open set recognition predictions with the inner, outer, halfpoint, \
                  and overall measures; generates seeded openness-controlled split plans; \
                  quantifies base-metric bias under random prediction; and runs a synthetic \
                  end-to-end demo. All randomness is seeded and reproducible."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a prediction file against a catalog.
    Score(commands::score::ScoreArgs),
    /// Generate a seeded known/unknown split plan.
    Plan(commands::plan::PlanArgs),
    /// Run the random-prediction baseline study.
    Simulate(commands::simulate::SimulateArgs),
    /// Tabulate test-set imbalance against openness.
    Grid(commands::grid::GridArgs),
    /// Run the full pipeline on synthetic data.
    Demo(commands::demo::DemoArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Score(args) => commands::score::run(args),
        Command::Plan(args) => commands::plan::run(args),
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Grid(args) => commands::grid::run(args),
        Command::Demo(args) => commands::demo::run(args),
    }
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            std::process::ExitCode::from(err.exit_code())
        }
    }
}
