//! Evaluation report schema and aggregation.

use serde::Serialize;

use osr_eval::catalog::ClassCatalog;
use osr_eval::record::UucClassDiagnostic;
use osr_eval::scores::{BaseMetric, ScoreSuite};

pub const EVALUATION_REPORT_SCHEMA: &str = "osr-eval/evaluation-report/v1";

#[derive(Debug, Clone, Serialize)]
pub struct CatalogSummary {
    pub kkc_count: usize,
    pub uuc_count: usize,
    pub kkc_labels: Vec<String>,
    pub uuc_labels: Vec<String>,
}

impl CatalogSummary {
    pub fn of(catalog: &ClassCatalog) -> Self {
        Self {
            kkc_count: catalog.k(),
            uuc_count: catalog.uuc_labels().len(),
            kkc_labels: catalog.kkc_labels().to_vec(),
            uuc_labels: catalog.uuc_labels().to_vec(),
        }
    }
}

/// One scored evaluation run. The positional fields are `None` for plain
/// single-file scoring and set for plan-driven runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunScores {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_index: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repetition: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fold: Option<u32>,
    pub openness: f64,
    pub suite: ScoreSuite,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Population standard deviation.
    pub std_dev: f64,
}

fn mean_std(values: &[f64]) -> Option<MeanStd> {
    if values.is_empty() {
        return None;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    Some(MeanStd {
        mean,
        std_dev: var.sqrt(),
    })
}

/// Scores of one configuration aggregated over repetitions: fold scores
/// are averaged within each repetition first, then the mean and
/// population standard deviation are taken across repetition means.
#[derive(Debug, Clone, Serialize)]
pub struct AggregateScores {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_index: Option<u32>,
    pub n_kkc: u32,
    pub n_uuc: u32,
    pub openness: f64,
    pub repetitions: u32,
    pub folds: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner: Option<MeanStd>,
    pub outer: MeanStd,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halfpoint: Option<MeanStd>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overall: Option<MeanStd>,
    /// Mean known:unknown sample ratio over the aggregated runs; `None`
    /// when some run had no unknown-class samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imbalance_ratio: Option<f64>,
}

/// Aggregates runs of one configuration. `runs` must be nonempty and
/// carry `repetition` indices; fold granularity inside a repetition is
/// averaged away first.
pub fn aggregate_runs(
    config_index: Option<u32>,
    n_kkc: u32,
    n_uuc: u32,
    openness: f64,
    folds: u32,
    runs: &[RunScores],
) -> AggregateScores {
    let mut repetition_ids: Vec<Option<u32>> = runs.iter().map(|r| r.repetition).collect();
    repetition_ids.sort_unstable();
    repetition_ids.dedup();

    let per_repetition = |extract: &dyn Fn(&ScoreSuite) -> Option<f64>| -> Vec<f64> {
        repetition_ids
            .iter()
            .filter_map(|&rep| {
                let values: Vec<f64> = runs
                    .iter()
                    .filter(|r| r.repetition == rep)
                    .filter_map(|r| extract(&r.suite))
                    .collect();
                mean_std(&values).map(|m| m.mean)
            })
            .collect()
    };

    let outer = mean_std(&per_repetition(&|s| Some(s.outer))).expect("runs are nonempty");
    let inner_values = per_repetition(&|s| s.inner);
    let halfpoint_values = per_repetition(&|s| s.halfpoint);
    let overall_values = per_repetition(&|s| s.overall);

    let ratios: Vec<Option<f64>> = runs
        .iter()
        .map(|r| r.suite.diagnostics.imbalance_ratio)
        .collect();
    let imbalance_ratio = if ratios.iter().all(|r| r.is_some()) {
        mean_std(&ratios.iter().map(|r| r.unwrap()).collect::<Vec<_>>()).map(|m| m.mean)
    } else {
        None
    };

    AggregateScores {
        config_index,
        n_kkc,
        n_uuc,
        openness,
        repetitions: repetition_ids.len() as u32,
        folds,
        inner: (inner_values.len() == repetition_ids.len())
            .then(|| mean_std(&inner_values))
            .flatten(),
        outer,
        halfpoint: (halfpoint_values.len() == repetition_ids.len())
            .then(|| mean_std(&halfpoint_values))
            .flatten(),
        overall: (overall_values.len() == repetition_ids.len())
            .then(|| mean_std(&overall_values))
            .flatten(),
        imbalance_ratio,
    }
}

/// The report emitted by `score` and `demo`: per-run suites plus
/// per-configuration aggregates, with enough provenance (seed, tool
/// version, catalog) to reproduce the run.
#[derive(Debug, Clone, Serialize)]
pub struct EvaluationReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub base_metric: BaseMetric,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogSummary>,
    /// Optional per-unknown-class view of what the aggregation folded
    /// together.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uuc_breakdown: Option<Vec<UucClassDiagnostic>>,
    pub runs: Vec<RunScores>,
    pub aggregates: Vec<AggregateScores>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl EvaluationReport {
    pub fn new(base_metric: BaseMetric) -> Self {
        Self {
            schema: EVALUATION_REPORT_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            base_metric,
            seed: None,
            catalog: None,
            uuc_breakdown: None,
            runs: Vec::new(),
            aggregates: Vec::new(),
            notes: Vec::new(),
        }
    }
}
