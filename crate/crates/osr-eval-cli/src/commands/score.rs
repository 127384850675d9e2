//! `osr-eval score`: derive the four scores from a prediction file.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::Args;

use osr_eval::error::Error;
use osr_eval::protocol::openness;
use osr_eval::record::validate_records;
use osr_eval::scores::{score_suite, BaseMetric};

use crate::cli_error::{CliError, CliResult};
use crate::formats::{read_catalog, read_predictions, to_pretty_json};
use crate::report::{aggregate_runs, CatalogSummary, EvaluationReport, RunScores};
use crate::BaseMetricFlag;

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Prediction records: JSONL, or CSV when the path ends in .csv.
    #[arg(long)]
    pub predictions: PathBuf,
    /// Catalog JSON declaring the known and unknown-unknown labels.
    #[arg(long)]
    pub catalog: PathBuf,
    /// Base metric applied to the derived matrices.
    #[arg(long, value_enum, default_value_t = BaseMetricFlag::BalancedAccuracy)]
    pub base: BaseMetricFlag,
    /// Add a per-unknown-class diagnostic (record and leak counts) to
    /// the report; scoring always aggregates unknown classes into one.
    #[arg(long)]
    pub uuc_breakdown: bool,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Maps a record-validation failure to exit code 2, quoting the source
/// line of the offending record.
fn schema_error(err: Error, lines: &[u64], path: &std::path::Path) -> CliError {
    let line_of = |index: usize| lines.get(index).copied().unwrap_or(0);
    match &err {
        Error::UnknownLabel { index, .. }
        | Error::UnknownPredLabel { index, .. }
        | Error::UucPrediction { index, .. }
        | Error::InvalidClosedPred { index, .. }
        | Error::ScoreLengthMismatch { index, .. }
        | Error::InvalidScore { index, .. } => CliError::schema(anyhow!(
            "{} line {}: {err}",
            path.display(),
            line_of(*index)
        )),
        _ => CliError::metric(anyhow!(err)),
    }
}

pub fn run(args: ScoreArgs) -> CliResult<()> {
    let base_metric: BaseMetric = args.base.into();
    if matches!(base_metric, BaseMetric::Accuracy | BaseMetric::F1Binary) {
        eprintln!(
            "warning: {} drifts with the known:unknown sample ratio under random prediction; \
             balanced accuracy is the imbalance-robust default",
            base_metric.name()
        );
    }

    let catalog = read_catalog(&args.catalog)?;
    let loaded = read_predictions(&args.predictions)?;
    let validated = validate_records(&loaded.records, &catalog)
        .map_err(|e| schema_error(e, &loaded.lines, &args.predictions))?;

    if validated.missing_closed_pred_count() > 0 {
        eprintln!(
            "warning: {} rejected known-class record(s) carry no closed-set fallback; \
             the inner score will be unavailable",
            validated.missing_closed_pred_count()
        );
    }

    let suite = score_suite(&validated, base_metric).map_err(|e| CliError::metric(anyhow!(e)))?;
    for note in &suite.notes {
        eprintln!("note: {note}");
    }

    let catalog_openness = openness(
        catalog.k() as u32,
        catalog.uuc_labels().len() as u32,
    )
    .map_err(|e| CliError::metric(anyhow!(e)))?;

    let run = RunScores {
        config_index: None,
        repetition: None,
        fold: None,
        openness: catalog_openness,
        suite,
    };
    let mut report = EvaluationReport::new(base_metric);
    report.catalog = Some(CatalogSummary::of(&catalog));
    if args.uuc_breakdown {
        report.uuc_breakdown = Some(validated.uuc_breakdown());
    }
    report.notes = run.suite.notes.clone();
    report.aggregates = vec![aggregate_runs(
        None,
        catalog.k() as u32,
        catalog.uuc_labels().len() as u32,
        catalog_openness,
        1,
        std::slice::from_ref(&run),
    )];
    report.runs = vec![run];

    let text = to_pretty_json(&report)?;
    match &args.output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing report {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
