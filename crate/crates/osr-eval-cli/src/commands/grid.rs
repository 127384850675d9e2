//! `osr-eval grid`: tabulate test-set imbalance against openness.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::Args;

use osr_eval::simulate::{imbalance_grid, imbalance_grid_csv};

use crate::cli_error::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Test samples contributed by each known class.
    #[arg(long)]
    pub kkc_count: u64,
    /// Test samples contributed by each unknown class.
    #[arg(long)]
    pub uuc_count: u64,
    /// Largest known-class count tabulated.
    #[arg(long, default_value_t = 10)]
    pub max_kkc: u32,
    /// Largest unknown-class count tabulated.
    #[arg(long, default_value_t = 900)]
    pub max_uuc: u32,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: GridArgs) -> CliResult<()> {
    let rows = imbalance_grid(args.kkc_count, args.uuc_count, args.max_kkc, args.max_uuc)
        .map_err(|e| CliError::schema(anyhow!(e)))?;
    let csv = imbalance_grid_csv(&rows);
    match &args.output {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    Ok(())
}
