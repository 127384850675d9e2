//! `osr-eval plan`: generate a seeded known/unknown split plan.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, ValueEnum};

use osr_eval::protocol::{holdout_plan, outlier_plan};

use crate::cli_error::{CliError, CliResult};
use crate::formats::{parse_configs, read_class_list, to_pretty_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolFlag {
    /// Known and unknown classes drawn as disjoint subsets of one list.
    Holdout,
    /// Known classes from one list, unknown classes from another.
    Outlier,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolFlag,
    /// Class list for the holdout protocol (one label per line).
    #[arg(long, required_if_eq("protocol", "holdout"), conflicts_with_all = ["kkc_classes", "uuc_classes"])]
    pub classes: Option<PathBuf>,
    /// Known-class source list for the outlier protocol.
    #[arg(long, required_if_eq("protocol", "outlier"))]
    pub kkc_classes: Option<PathBuf>,
    /// Unknown-class source list for the outlier protocol.
    #[arg(long, required_if_eq("protocol", "outlier"))]
    pub uuc_classes: Option<PathBuf>,
    /// Cardinality configurations, e.g. "2:8,3:7,5:5".
    #[arg(long)]
    pub configs: String,
    /// Class-assignment repetitions per configuration.
    #[arg(long, default_value_t = 5)]
    pub repetitions: u32,
    /// Cross-validation folds noted in the plan.
    #[arg(long, default_value_t = 2)]
    pub folds: u32,
    /// Master seed; falls back to $OSR_EVAL_SEED, then 42.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Plan destination; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: PlanArgs) -> CliResult<()> {
    let configs = parse_configs(&args.configs)?;
    let seed = crate::resolve_seed(args.seed)?;

    let plan = match args.protocol {
        ProtocolFlag::Holdout => {
            let classes = read_class_list(args.classes.as_ref().expect("required by clap"))?;
            holdout_plan(&classes, &configs, args.repetitions, args.folds, seed)
        }
        ProtocolFlag::Outlier => {
            let kkc = read_class_list(args.kkc_classes.as_ref().expect("required by clap"))?;
            let uuc = read_class_list(args.uuc_classes.as_ref().expect("required by clap"))?;
            outlier_plan(&kkc, &uuc, &configs, args.repetitions, args.folds, seed)
        }
    }
    .map_err(|e| CliError::schema(anyhow!(e)))?;

    let text = to_pretty_json(&plan)?;
    match &args.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing plan {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}
