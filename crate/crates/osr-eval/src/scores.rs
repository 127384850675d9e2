//! The four evaluation scores and their base metrics.
//!
//! Every score applies one base metric to a matrix derived from the
//! general confusion matrix:
//!
//! * **Inner**: the K x K closed-set matrix over known-class records
//!   only. Records the recognizer rejected are rerouted to their
//!   closed-set fallback, so the ability to reject unknowns does not
//!   affect the value.
//! * **Outer**: the binary known-vs-unknown matrix (known positive,
//!   unknown negative); assesses rejection only.
//! * **Halfpoint**: the known rows of the general matrix including the
//!   rejection column, with the unknown row zeroed: false unknowns are
//!   penalized, unknown-class records are not scored.
//! * **Overall**: the general matrix itself, treating the aggregated
//!   unknown category as one extra class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    build_general_matrix, BinaryConfusionMatrix, CountMatrix, GeneralConfusionMatrix,
};
use crate::record::{TrueClass, ValidatedRecords};

/// Base metric applied to the derived matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseMetric {
    /// Mean of per-class recalls over rows with support; robust to the
    /// known/unknown imbalance ratio.
    BalancedAccuracy,
    /// Trace over total; biased under imbalance.
    Accuracy,
    /// Harmonic precision/recall mean on the binary dichotomy; only the
    /// Outer score is defined under it.
    F1Binary,
}

impl BaseMetric {
    pub fn name(self) -> &'static str {
        match self {
            Self::BalancedAccuracy => "balanced_accuracy",
            Self::Accuracy => "accuracy",
            Self::F1Binary => "f1",
        }
    }
}

/// Balanced accuracy of a count matrix, with the number of zero-support
/// rows that were left out of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalancedAccuracy {
    pub value: f64,
    pub excluded_rows: usize,
}

/// Mean over rows with nonzero support of `diagonal / row sum`.
///
/// Rows without support are excluded from the mean rather than treated as
/// zero; the Halfpoint matrix's structurally empty unknown row must not
/// contribute an undefined recall.
pub fn balanced_accuracy(matrix: &CountMatrix) -> Result<BalancedAccuracy> {
    let mut sum = 0.0;
    let mut rows_with_support = 0usize;
    for i in 0..matrix.n() {
        let support = matrix.row_sum(i);
        if support > 0 {
            sum += matrix.get(i, i) as f64 / support as f64;
            rows_with_support += 1;
        }
    }
    if rows_with_support == 0 {
        return Err(Error::NoSupport);
    }
    Ok(BalancedAccuracy {
        value: sum / rows_with_support as f64,
        excluded_rows: matrix.n() - rows_with_support,
    })
}

/// Trace over total count.
pub fn accuracy(matrix: &CountMatrix) -> Result<f64> {
    let total = matrix.total();
    if total == 0 {
        return Err(Error::NoSupport);
    }
    Ok(matrix.trace() as f64 / total as f64)
}

/// F1 on the binary known-vs-unknown matrix, with its factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Score {
    pub value: f64,
    pub precision: f64,
    pub recall: f64,
    /// True when `tp == 0` made precision, recall, and F1 fall back to 0.
    pub degenerate: bool,
}

/// Precision, recall, and F1 with positives = known classes. All three
/// are 0 (flagged degenerate) when there are no true positives; random
/// baselines in heavily imbalanced cells land there routinely.
pub fn f1_binary(matrix: &BinaryConfusionMatrix) -> F1Score {
    let tp = matrix.true_positives as f64;
    if matrix.true_positives == 0 {
        return F1Score {
            value: 0.0,
            precision: 0.0,
            recall: 0.0,
            degenerate: true,
        };
    }
    let precision = tp / (tp + matrix.false_positives as f64);
    let recall = tp / (tp + matrix.false_negatives as f64);
    F1Score {
        value: 2.0 * precision * recall / (precision + recall),
        precision,
        recall,
        degenerate: false,
    }
}

/// Derives the K x K closed-set (Inner) matrix.
///
/// Only known-class records participate. The effective prediction is the
/// open-set one when it names a known class, otherwise the closed-set
/// fallback; a rejected record without a fallback is an error.
pub fn derive_inner_matrix(records: &ValidatedRecords) -> Result<CountMatrix> {
    let k = records.catalog().k();
    let mut matrix = CountMatrix::zeros(k);
    for (index, entry) in records.entries.iter().enumerate() {
        let TrueClass::Known(row) = entry.true_class else {
            continue;
        };
        let col = match entry.open {
            Some(j) => j,
            None => entry.closed.ok_or(Error::MissingClosedPred { index })?,
        };
        matrix.add(row, col, 1);
    }
    Ok(matrix)
}

/// Derives the binary known-vs-unknown (Outer) matrix from the marginals
/// of the general matrix.
pub fn derive_outer_matrix(general: &GeneralConfusionMatrix) -> BinaryConfusionMatrix {
    let k = general.unknown_index();
    BinaryConfusionMatrix {
        true_positives: general.kkc_block_total(),
        false_negatives: general.false_unknown_count(),
        false_positives: general.false_known_count(),
        true_negatives: general.get(k, k),
    }
}

/// Derives the Halfpoint matrix: the general matrix with its unknown row
/// zeroed, so only known-class records are scored and rejections of them
/// count against the recognizer.
pub fn derive_halfpoint_matrix(general: &GeneralConfusionMatrix) -> CountMatrix {
    let n = general.unknown_index() + 1;
    let mut matrix = CountMatrix::zeros(n);
    for i in 0..n - 1 {
        for j in 0..n {
            matrix.add(i, j, general.get(i, j));
        }
    }
    matrix
}

/// Derives the Overall matrix. It equals the general matrix; the named
/// derivation exists for symmetry with the other three.
pub fn derive_overall_matrix(general: &GeneralConfusionMatrix) -> CountMatrix {
    general.counts().clone()
}

/// Imbalance and error-structure diagnostics attached to a score suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteDiagnostics {
    pub kkc_true_records: u64,
    pub uuc_true_records: u64,
    /// Known-true over unknown-true record counts; `None` when there are
    /// no unknown-true records (flagged infinite downstream).
    pub imbalance_ratio: Option<f64>,
    /// Known-class records rejected as unknown.
    pub false_unknowns: u64,
    /// Unknown-class records accepted as known.
    pub false_knowns: u64,
}

/// The four scores under one base metric.
///
/// `outer` is always defined for a nonempty record set. The other three
/// are `None` where the base metric or the record set does not support
/// them, with the reason recorded in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSuite {
    pub base_metric: BaseMetric,
    pub inner: Option<f64>,
    pub outer: f64,
    pub halfpoint: Option<f64>,
    pub overall: Option<f64>,
    pub diagnostics: SuiteDiagnostics,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn metric_over(matrix: &CountMatrix, base: BaseMetric) -> Result<f64> {
    match base {
        BaseMetric::BalancedAccuracy => Ok(balanced_accuracy(matrix)?.value),
        BaseMetric::Accuracy => accuracy(matrix),
        BaseMetric::F1Binary => unreachable!("multiclass F1 is not offered"),
    }
}

/// Computes all four scores of a validated record set under one base
/// metric.
///
/// Under [`BaseMetric::F1Binary`] only the Outer score is defined. Under
/// the other metrics the Inner score degrades to `None` (with a note)
/// when some rejected known-class record lacks a closed-set fallback, or
/// when the catalog has a single known class; the remaining scores are
/// unaffected.
pub fn score_suite(records: &ValidatedRecords, base_metric: BaseMetric) -> Result<ScoreSuite> {
    let general = build_general_matrix(records);
    let outer_matrix = derive_outer_matrix(&general);
    let mut notes = Vec::new();

    let outer = match base_metric {
        BaseMetric::BalancedAccuracy => balanced_accuracy(&outer_matrix.as_count_matrix())?.value,
        BaseMetric::Accuracy => accuracy(&outer_matrix.as_count_matrix())?,
        BaseMetric::F1Binary => {
            if records.is_empty() {
                return Err(Error::NoSupport);
            }
            let f1 = f1_binary(&outer_matrix);
            if f1.degenerate {
                notes.push("no true positives; F1 reported as 0".into());
            }
            f1.value
        }
    };

    let (inner, halfpoint, overall) = match base_metric {
        BaseMetric::F1Binary => {
            notes.push(
                "F1 is defined on the known-vs-unknown dichotomy only; inner, halfpoint, and \
                 overall are unavailable under it"
                    .into(),
            );
            (None, None, None)
        }
        _ if records.catalog().k() < 2 => {
            notes.push(
                "a single known class admits only the outer score; inner, halfpoint, and \
                 overall need at least two"
                    .into(),
            );
            (None, None, None)
        }
        _ => {
            let inner = match derive_inner_matrix(records) {
                Ok(matrix) => Some(metric_over(&matrix, base_metric)?),
                Err(Error::MissingClosedPred { index }) => {
                    notes.push(format!(
                        "inner score unavailable: record {index} was rejected as unknown \
                         without a closed-set fallback"
                    ));
                    None
                }
                Err(other) => return Err(other),
            };
            let halfpoint = metric_over(&derive_halfpoint_matrix(&general), base_metric)?;
            let overall = metric_over(&derive_overall_matrix(&general), base_metric)?;
            (inner, Some(halfpoint), Some(overall))
        }
    };

    let kkc_true = records.kkc_true_count();
    let uuc_true = records.uuc_true_count();
    Ok(ScoreSuite {
        base_metric,
        inner,
        outer,
        halfpoint,
        overall,
        diagnostics: SuiteDiagnostics {
            kkc_true_records: kkc_true,
            uuc_true_records: uuc_true,
            imbalance_ratio: (uuc_true > 0).then(|| kkc_true as f64 / uuc_true as f64),
            false_unknowns: general.false_unknown_count(),
            false_knowns: general.false_known_count(),
        },
        notes,
    })
}
