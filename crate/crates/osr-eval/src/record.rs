//! Prediction records and their validation against a catalog.

use serde::{Deserialize, Serialize};

use crate::catalog::{ClassCatalog, LabelRole};
use crate::error::{Error, Result};

/// Reserved marker for "rejected as unknown" in serialized records. It is
/// not a legal class label.
pub const UNKNOWN_SENTINEL: &str = "__unknown__";

/// The open-set decision of a recognizer: a known class or a rejection.
///
/// Serializes as the bare label string, with [`UNKNOWN_SENTINEL`]
/// standing in for rejection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpenPrediction {
    Known(String),
    Unknown,
}

impl OpenPrediction {
    pub fn known(label: impl Into<String>) -> Self {
        Self::Known(label.into())
    }

    pub fn as_label(&self) -> &str {
        match self {
            Self::Known(label) => label,
            Self::Unknown => UNKNOWN_SENTINEL,
        }
    }
}

impl Serialize for OpenPrediction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_label())
    }
}

impl<'de> Deserialize<'de> for OpenPrediction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let label = String::deserialize(deserializer)?;
        Ok(if label == UNKNOWN_SENTINEL {
            Self::Unknown
        } else {
            Self::Known(label)
        })
    }
}

/// One evaluated test sample.
///
/// `open_pred` is the open-set decision; `closed_pred` is the closed-set
/// decision the model would have made were rejection unavailable (its
/// "second best shot"). The two need not agree when they come from
/// separate heads, although recognizers that threshold a single score
/// vector produce them in agreement by construction. When `closed_pred`
/// is absent but `scores` are present the argmax stands in for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    /// Ground-truth label; may be a known or an unknown-unknown class.
    #[serde(rename = "true")]
    pub true_label: String,
    pub open_pred: OpenPrediction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_pred: Option<String>,
    /// Per-known-class support, one non-negative entry per known class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<f64>>,
}

impl PredictionRecord {
    pub fn new(true_label: impl Into<String>, open_pred: OpenPrediction) -> Self {
        Self {
            true_label: true_label.into(),
            open_pred,
            closed_pred: None,
            scores: None,
        }
    }

    pub fn with_closed_pred(mut self, closed_pred: impl Into<String>) -> Self {
        self.closed_pred = Some(closed_pred.into());
        self
    }

    pub fn with_scores(mut self, scores: Vec<f64>) -> Self {
        self.scores = Some(scores);
        self
    }
}

/// Ground-truth side of a resolved record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TrueClass {
    Known(usize),
    Unknown(usize),
}

/// A record resolved to catalog indices. `open` is `None` on rejection.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ResolvedRecord {
    pub true_class: TrueClass,
    pub open: Option<usize>,
    pub closed: Option<usize>,
}

/// A record set checked against a catalog, with closed-set predictions
/// materialized from scores where possible.
#[derive(Debug, Clone)]
pub struct ValidatedRecords {
    catalog: ClassCatalog,
    pub(crate) entries: Vec<ResolvedRecord>,
    kkc_true: u64,
    uuc_true: u64,
    missing_closed_pred: u64,
}

impl ValidatedRecords {
    pub fn catalog(&self) -> &ClassCatalog {
        &self.catalog
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of records whose true label is a known class.
    pub fn kkc_true_count(&self) -> u64 {
        self.kkc_true
    }

    /// Number of records whose true label is an unknown-unknown class.
    pub fn uuc_true_count(&self) -> u64 {
        self.uuc_true
    }

    /// Records that would need a closed-set fallback but have none; the
    /// Inner score is unavailable when this is nonzero.
    pub fn missing_closed_pred_count(&self) -> u64 {
        self.missing_closed_pred
    }

    /// Per-unknown-class record and predicted-known counts. The scoring
    /// pipeline aggregates unknown classes into one category; this is the
    /// diagnostic view of what got folded together.
    pub fn uuc_breakdown(&self) -> Vec<UucClassDiagnostic> {
        let mut rows: Vec<UucClassDiagnostic> = self
            .catalog
            .uuc_labels()
            .iter()
            .map(|label| UucClassDiagnostic {
                label: label.clone(),
                records: 0,
                predicted_known: 0,
            })
            .collect();
        for entry in &self.entries {
            if let TrueClass::Unknown(i) = entry.true_class {
                rows[i].records += 1;
                if entry.open.is_some() {
                    rows[i].predicted_known += 1;
                }
            }
        }
        rows
    }
}

/// Diagnostic row of [`ValidatedRecords::uuc_breakdown`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UucClassDiagnostic {
    pub label: String,
    pub records: u64,
    /// Records of this class the recognizer failed to reject.
    pub predicted_known: u64,
}

/// Argmax with the lowest index winning ties.
pub(crate) fn argmax_lowest(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Checks records against a catalog and resolves labels to indices.
///
/// Scores, when present, must have one non-negative finite entry per
/// known class; a missing `closed_pred` is materialized as their argmax
/// (lowest index on ties). Records that are rejected as unknown and have
/// neither `closed_pred` nor scores are accepted but flagged: only the
/// Inner score needs the fallback, and it is reported as unavailable.
pub fn validate_records(
    records: &[PredictionRecord],
    catalog: &ClassCatalog,
) -> Result<ValidatedRecords> {
    let k = catalog.k();
    let mut entries = Vec::with_capacity(records.len());
    let mut kkc_true = 0u64;
    let mut uuc_true = 0u64;
    let mut missing_closed_pred = 0u64;

    for (index, record) in records.iter().enumerate() {
        let true_class = match catalog.role_of(&record.true_label) {
            Some(LabelRole::Known(i)) => TrueClass::Known(i),
            Some(LabelRole::Unknown(i)) => TrueClass::Unknown(i),
            None => {
                return Err(Error::UnknownLabel {
                    index,
                    label: record.true_label.clone(),
                })
            }
        };

        let open = match &record.open_pred {
            OpenPrediction::Unknown => None,
            OpenPrediction::Known(label) => match catalog.role_of(label) {
                Some(LabelRole::Known(i)) => Some(i),
                Some(LabelRole::Unknown(_)) => {
                    return Err(Error::UucPrediction {
                        index,
                        label: label.clone(),
                    })
                }
                None => {
                    return Err(Error::UnknownPredLabel {
                        index,
                        label: label.clone(),
                    })
                }
            },
        };

        if let Some(scores) = &record.scores {
            if scores.len() != k {
                return Err(Error::ScoreLengthMismatch {
                    index,
                    got: scores.len(),
                    expected: k,
                });
            }
            for &s in scores {
                if !s.is_finite() {
                    return Err(Error::InvalidScore {
                        index,
                        reason: "score vector contains a non-finite value".into(),
                    });
                }
                if s < 0.0 {
                    return Err(Error::InvalidScore {
                        index,
                        reason: "score vector contains a negative value".into(),
                    });
                }
            }
        }

        let closed = match &record.closed_pred {
            Some(label) => match catalog.role_of(label) {
                Some(LabelRole::Known(i)) => Some(i),
                _ => {
                    return Err(Error::InvalidClosedPred {
                        index,
                        label: label.clone(),
                    })
                }
            },
            None => record.scores.as_deref().map(argmax_lowest),
        };

        match true_class {
            TrueClass::Known(_) => kkc_true += 1,
            TrueClass::Unknown(_) => uuc_true += 1,
        }
        if matches!(true_class, TrueClass::Known(_)) && open.is_none() && closed.is_none() {
            missing_closed_pred += 1;
        }

        entries.push(ResolvedRecord {
            true_class,
            open,
            closed,
        });
    }

    Ok(ValidatedRecords {
        catalog: catalog.clone(),
        entries,
        kkc_true,
        uuc_true,
        missing_closed_pred,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> ClassCatalog {
        ClassCatalog::new(["cat", "dog"], ["newt"]).unwrap()
    }

    #[test]
    fn closed_pred_materialized_from_scores() {
        let records = vec![PredictionRecord::new("cat", OpenPrediction::Unknown)
            .with_scores(vec![0.6, 0.4])];
        let validated = validate_records(&records, &catalog()).unwrap();
        assert_eq!(validated.entries[0].closed, Some(0));
        assert_eq!(validated.kkc_true_count(), 1);
        assert_eq!(validated.missing_closed_pred_count(), 0);
    }

    #[test]
    fn argmax_breaks_ties_toward_lowest_index() {
        assert_eq!(argmax_lowest(&[0.5, 0.5]), 0);
        assert_eq!(argmax_lowest(&[0.1, 0.7, 0.7]), 1);
    }

    #[test]
    fn uuc_prediction_is_rejected() {
        let records = vec![PredictionRecord::new("cat", OpenPrediction::known("newt"))];
        let err = validate_records(&records, &catalog()).unwrap_err();
        assert!(matches!(err, Error::UucPrediction { index: 0, .. }));
    }

    #[test]
    fn score_length_must_match_k() {
        let records = vec![PredictionRecord::new("cat", OpenPrediction::Unknown)
            .with_scores(vec![0.2, 0.3, 0.5])];
        let err = validate_records(&records, &catalog()).unwrap_err();
        assert!(matches!(
            err,
            Error::ScoreLengthMismatch {
                got: 3,
                expected: 2,
                ..
            }
        ));
    }

    #[test]
    fn negative_scores_are_rejected() {
        let records = vec![PredictionRecord::new("cat", OpenPrediction::Unknown)
            .with_scores(vec![-0.1, 1.1])];
        assert!(matches!(
            validate_records(&records, &catalog()).unwrap_err(),
            Error::InvalidScore { .. }
        ));
    }

    #[test]
    fn missing_closed_pred_is_flagged_not_fatal() {
        let records = vec![
            PredictionRecord::new("cat", OpenPrediction::Unknown),
            PredictionRecord::new("newt", OpenPrediction::Unknown),
        ];
        let validated = validate_records(&records, &catalog()).unwrap();
        assert_eq!(validated.missing_closed_pred_count(), 1);
        assert_eq!(validated.uuc_true_count(), 1);
    }

    #[test]
    fn unknown_sentinel_round_trips_in_serde() {
        let record = PredictionRecord::new("cat", OpenPrediction::Unknown);
        let json = serde_json::to_string(&record).unwrap();
        assert!(json.contains(UNKNOWN_SENTINEL));
        let back: PredictionRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
    }

    #[test]
    fn uuc_breakdown_counts_leaks() {
        let cat = ClassCatalog::new(["a"], ["u1", "u2"]).unwrap();
        let records = vec![
            PredictionRecord::new("u1", OpenPrediction::known("a")),
            PredictionRecord::new("u1", OpenPrediction::Unknown),
            PredictionRecord::new("u2", OpenPrediction::Unknown),
        ];
        let validated = validate_records(&records, &cat).unwrap();
        let rows = validated.uuc_breakdown();
        assert_eq!(rows[0].records, 2);
        assert_eq!(rows[0].predicted_known, 1);
        assert_eq!(rows[1].records, 1);
        assert_eq!(rows[1].predicted_known, 0);
    }
}
