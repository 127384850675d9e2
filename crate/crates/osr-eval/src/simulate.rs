//! Random-prediction baseline simulation and the imbalance grid.
//!
//! The baseline study answers the question "what does each base metric
//! report when the recognizer is guessing?" across known/unknown class
//! configurations. Balanced accuracy stays near 0.5 under guessing in
//! every configuration; F1 and accuracy drift with the imbalance ratio,
//! which is why they are poor defaults for open set evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::matrix::BinaryConfusionMatrix;
use crate::protocol::openness;
use crate::scores::{accuracy, balanced_accuracy, f1_binary, BaseMetric};
use crate::seeding::SeedStream;

/// Stream role tag for trial draws; part of the frozen sub-seeding
/// scheme. Trial `(cell, t)` draws from `(seed, cell, t, ROLE_TRIAL)`, so
/// extending the grid or the trial count never perturbs existing trials.
const ROLE_TRIAL: u64 = 0x5452_4941; // "TRIA"

/// Number of uniform histogram bins over `[0, 1]`.
pub const HISTOGRAM_BINS: usize = 101;

/// How the random predictor chooses its positive-class probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomPredictorMode {
    /// Predicts "known" with probability one half.
    DefaultHalf,
    /// Predicts "known" with probability equal to the ground-truth known
    /// fraction, as if the guesser had been told the test proportions.
    PriorAware,
}

impl RandomPredictorMode {
    fn positive_probability(self, n_pos: u64, n_neg: u64) -> f64 {
        match self {
            Self::DefaultHalf => 0.5,
            Self::PriorAware => {
                let total = n_pos + n_neg;
                if total == 0 {
                    0.5
                } else {
                    n_pos as f64 / total as f64
                }
            }
        }
    }
}

/// One random-prediction trial on the known-vs-unknown dichotomy: each of
/// the `n_pos` known-class samples is predicted "known" with the mode's
/// probability, and likewise each of the `n_neg` unknown ones. Positives
/// are drawn before negatives; the draw order is part of the stream
/// contract.
pub fn random_outer_trial(
    n_pos: u64,
    n_neg: u64,
    mode: RandomPredictorMode,
    rng: &mut SeedStream,
) -> BinaryConfusionMatrix {
    let p = mode.positive_probability(n_pos, n_neg);
    let mut tp = 0u64;
    for _ in 0..n_pos {
        if rng.next_bool(p) {
            tp += 1;
        }
    }
    let mut fp = 0u64;
    for _ in 0..n_neg {
        if rng.next_bool(p) {
            fp += 1;
        }
    }
    BinaryConfusionMatrix {
        true_positives: tp,
        false_negatives: n_pos - tp,
        false_positives: fp,
        true_negatives: n_neg - fp,
    }
}

/// Histogram, mean, and standard deviation of one metric over the trials
/// of one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: BaseMetric,
    pub mean: f64,
    /// Population standard deviation over trials.
    pub std_dev: f64,
    /// Counts over [`HISTOGRAM_BINS`] uniform bins covering `[0, 1]`;
    /// bin `i` covers `[i/B, (i+1)/B)` with the last bin closed.
    pub histogram: Vec<u32>,
}

/// Results for one `(known classes, unknown classes)` grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub n_kkc_classes: u32,
    pub n_uuc_classes: u32,
    pub openness: f64,
    pub n_pos: u64,
    pub n_neg: u64,
    /// Summaries in fixed order: f1, accuracy, balanced_accuracy.
    pub metrics: Vec<MetricSummary>,
}

/// Full report of a random-baseline study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub schema: String,
    pub mode: RandomPredictorMode,
    pub seed: u64,
    pub trials: u32,
    pub per_class_count: u32,
    pub histogram_bins: u32,
    pub cells: Vec<CellReport>,
}

pub const SIMULATION_REPORT_SCHEMA: &str = "osr-eval/simulation-report/v1";

/// The study grid used when callers have no opinion: known-class counts
/// {2, 4, 8, 16, 32} crossed with unknown-class counts {2, 10, 100,
/// 1000}, spanning balanced cells through a thousandfold class excess on
/// the unknown side.
pub fn default_grid() -> Vec<(u32, u32)> {
    let mut grid = Vec::new();
    for &n_kkc in &[2u32, 4, 8, 16, 32] {
        for &n_uuc in &[2u32, 10, 100, 1000] {
            grid.push((n_kkc, n_uuc));
        }
    }
    grid
}

#[inline]
fn bin_of(value: f64) -> usize {
    ((value * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1)
}

/// Per-trial metric values, in the report's fixed metric order.
fn trial_metrics(n_pos: u64, n_neg: u64, mode: RandomPredictorMode, rng: &mut SeedStream) -> [f64; 3] {
    let outer = random_outer_trial(n_pos, n_neg, mode, rng);
    let counts = outer.as_count_matrix();
    let f1 = f1_binary(&outer).value;
    let acc = accuracy(&counts).expect("trial has samples");
    let bac = balanced_accuracy(&counts).expect("trial has samples").value;
    [f1, acc, bac]
}

fn summarize(metric: BaseMetric, values: impl Iterator<Item = f64> + Clone, trials: u32) -> MetricSummary {
    let mut histogram = vec![0u32; HISTOGRAM_BINS];
    let mut sum = 0.0;
    for v in values.clone() {
        histogram[bin_of(v)] += 1;
        sum += v;
    }
    let mean = sum / f64::from(trials);
    let mut var_sum = 0.0;
    for v in values {
        var_sum += (v - mean) * (v - mean);
    }
    MetricSummary {
        metric,
        mean,
        std_dev: (var_sum / f64::from(trials)).sqrt(),
        histogram,
    }
}

#[allow(clippy::too_many_arguments)]
fn study_cell(
    cell_index: usize,
    n_kkc_classes: u32,
    n_uuc_classes: u32,
    per_class_count: u32,
    trials: u32,
    mode: RandomPredictorMode,
    seed: u64,
    parallel: bool,
) -> Result<CellReport> {
    let n_pos = u64::from(n_kkc_classes) * u64::from(per_class_count);
    let n_neg = u64::from(n_uuc_classes) * u64::from(per_class_count);
    if n_pos + n_neg == 0 {
        return Err(Error::InvalidParameter(format!(
            "grid cell ({n_kkc_classes}, {n_uuc_classes}) has no samples"
        )));
    }
    let compute = |trial: usize| {
        let mut rng =
            SeedStream::for_context(seed, &[cell_index as u64, trial as u64, ROLE_TRIAL]);
        trial_metrics(n_pos, n_neg, mode, &mut rng)
    };
    let per_trial: Vec<[f64; 3]> = if parallel {
        map_indexed(trials as usize, compute)
    } else {
        (0..trials as usize).map(compute).collect()
    };
    let metrics = vec![
        summarize(BaseMetric::F1Binary, per_trial.iter().map(|m| m[0]), trials),
        summarize(BaseMetric::Accuracy, per_trial.iter().map(|m| m[1]), trials),
        summarize(BaseMetric::BalancedAccuracy, per_trial.iter().map(|m| m[2]), trials),
    ];
    Ok(CellReport {
        n_kkc_classes,
        n_uuc_classes,
        openness: openness(n_kkc_classes, n_uuc_classes)?,
        n_pos,
        n_neg,
        metrics,
    })
}

fn study(
    grid: &[(u32, u32)],
    per_class_count: u32,
    trials: u32,
    mode: RandomPredictorMode,
    seed: u64,
    parallel: bool,
) -> Result<SimulationReport> {
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    if per_class_count < 1 {
        return Err(Error::InvalidParameter(
            "per-class sample count must be positive".into(),
        ));
    }
    let mut cells = Vec::with_capacity(grid.len());
    for (cell_index, &(n_kkc_classes, n_uuc_classes)) in grid.iter().enumerate() {
        cells.push(study_cell(
            cell_index,
            n_kkc_classes,
            n_uuc_classes,
            per_class_count,
            trials,
            mode,
            seed,
            parallel,
        )?);
    }
    Ok(SimulationReport {
        schema: SIMULATION_REPORT_SCHEMA.into(),
        mode,
        seed,
        trials,
        per_class_count,
        histogram_bins: HISTOGRAM_BINS as u32,
        cells,
    })
}

/// Runs the random-baseline study: for each grid cell of
/// `(known classes, unknown classes)`, `trials` independent guessing
/// trials on `classes x per_class_count` samples per side, summarized as
/// F1 / accuracy / balanced-accuracy histograms.
///
/// Every trial draws from its own `(seed, cell, trial)` stream and
/// results are aggregated in trial order, so the report is identical
/// however the trials are scheduled; with the `parallel` feature the
/// trials of a cell run on the rayon pool.
pub fn random_baseline_study(
    grid: &[(u32, u32)],
    per_class_count: u32,
    trials: u32,
    mode: RandomPredictorMode,
    seed: u64,
) -> Result<SimulationReport> {
    study(grid, per_class_count, trials, mode, seed, true)
}

/// Sequential reference implementation of [`random_baseline_study`];
/// produces identical reports.
pub fn random_baseline_study_sequential(
    grid: &[(u32, u32)],
    per_class_count: u32,
    trials: u32,
    mode: RandomPredictorMode,
    seed: u64,
) -> Result<SimulationReport> {
    study(grid, per_class_count, trials, mode, seed, false)
}

impl SimulationReport {
    /// Long-format CSV: one row per cell x metric x histogram bin.
    pub fn to_long_csv(&self) -> String {
        let mut out = String::from(
            "n_kkc_classes,n_uuc_classes,metric,bin_index,bin_low,bin_high,count\n",
        );
        let bins = self.histogram_bins as usize;
        for cell in &self.cells {
            for metric in &cell.metrics {
                for (bin, &count) in metric.histogram.iter().enumerate() {
                    let low = bin as f64 / bins as f64;
                    let high = (bin + 1) as f64 / bins as f64;
                    out.push_str(&format!(
                        "{},{},{},{},{:.6},{:.6},{}\n",
                        cell.n_kkc_classes,
                        cell.n_uuc_classes,
                        metric.metric.name(),
                        bin,
                        low,
                        high,
                        count
                    ));
                }
            }
        }
        out
    }
}

/// One row of the openness-vs-sample-imbalance grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceGridRow {
    pub n_kkc: u32,
    pub n_uuc: u32,
    pub openness: f64,
    pub kkc_test_samples: u64,
    pub uuc_test_samples: u64,
    /// Known over unknown test-sample counts; `None` with the flag set
    /// when there are no unknown samples.
    pub imbalance_ratio: Option<f64>,
    pub ratio_infinite: bool,
}

/// Tabulates test-set sample counts against openness for every
/// `(n_kkc, n_uuc)` pair in `1..=max_kkc x 1..=max_uuc`, with each known
/// class contributing `kkc_per_class` test samples and each unknown
/// class `uuc_per_class`.
///
/// Openness is a function of class counts alone; the table makes visible
/// that the same openness can come with known samples in the majority or
/// the minority, depending on per-class sizes.
pub fn imbalance_grid(
    kkc_per_class: u64,
    uuc_per_class: u64,
    max_kkc: u32,
    max_uuc: u32,
) -> Result<Vec<ImbalanceGridRow>> {
    let mut rows = Vec::with_capacity(max_kkc as usize * max_uuc as usize);
    for n_kkc in 1..=max_kkc {
        for n_uuc in 1..=max_uuc {
            let kkc_test_samples = u64::from(n_kkc) * kkc_per_class;
            let uuc_test_samples = u64::from(n_uuc) * uuc_per_class;
            let infinite = uuc_test_samples == 0;
            rows.push(ImbalanceGridRow {
                n_kkc,
                n_uuc,
                openness: openness(n_kkc, n_uuc)?,
                kkc_test_samples,
                uuc_test_samples,
                imbalance_ratio: (!infinite)
                    .then(|| kkc_test_samples as f64 / uuc_test_samples as f64),
                ratio_infinite: infinite,
            });
        }
    }
    Ok(rows)
}

/// CSV rendering of an imbalance grid, one row per configuration.
pub fn imbalance_grid_csv(rows: &[ImbalanceGridRow]) -> String {
    let mut out = String::from(
        "n_kkc,n_uuc,openness,kkc_test_samples,uuc_test_samples,imbalance_ratio,ratio_infinite\n",
    );
    for row in rows {
        let ratio = row
            .imbalance_ratio
            .map(|r| format!("{r:.6}"))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{:.6},{},{},{},{}\n",
            row.n_kkc,
            row.n_uuc,
            row.openness,
            row.kkc_test_samples,
            row.uuc_test_samples,
            ratio,
            row.ratio_infinite
        ));
    }
    out
}
