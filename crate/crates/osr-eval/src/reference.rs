//! A fully worked reference evaluation.
//!
//! 76 prediction records over four known classes and two unknown-unknown
//! classes, small enough to check every derived matrix and score by hand.
//! The tests and documentation use it as a shared fixture.
//!
//! The general confusion matrix of this record set is
//!
//! ```text
//!             pred: k0  k1  k2  k3  unknown
//! true k0          10   3   0   2   1
//! true k1           1  12   0   0   2
//! true k2           0   0   9   1   5
//! true k3           1   1   0  10   3
//! true unknown      2   1   2   0  10
//! ```
//!
//! Each of the eleven rejected known-class records carries a closed-set
//! fallback so that the Inner score is defined. The particular fallback
//! assignment below is one consistent choice, not the only possible one:
//! row k0's single rejection falls back to k0; row k1's two rejections to
//! k0; row k2's five rejections to k2 (four) and k3 (one); row k3's three
//! rejections to k0.

use crate::catalog::ClassCatalog;
use crate::record::{OpenPrediction, PredictionRecord};

/// Known-class labels of the reference catalog.
pub const KKC_LABELS: [&str; 4] = ["k0", "k1", "k2", "k3"];

/// Unknown-unknown labels of the reference catalog. Two distinct labels
/// exercise the aggregation of unknown classes into a single category.
pub const UUC_LABELS: [&str; 2] = ["u0", "u1"];

/// The reference catalog: four known classes, two unknown-unknown ones.
pub fn catalog() -> ClassCatalog {
    ClassCatalog::new(KKC_LABELS, UUC_LABELS).expect("reference catalog is valid")
}

/// The 76 reference records.
pub fn records() -> Vec<PredictionRecord> {
    let mut records = Vec::with_capacity(76);

    // Known-class records predicted as a known class; the closed-set
    // decision agrees with the open-set one, as it does for recognizers
    // thresholding a single score vector.
    let known_block: [[u64; 4]; 4] = [
        [10, 3, 0, 2],
        [1, 12, 0, 0],
        [0, 0, 9, 1],
        [1, 1, 0, 10],
    ];
    for (i, row) in known_block.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            for _ in 0..count {
                records.push(
                    PredictionRecord::new(KKC_LABELS[i], OpenPrediction::known(KKC_LABELS[j]))
                        .with_closed_pred(KKC_LABELS[j]),
                );
            }
        }
    }

    // Known-class records rejected as unknown, with their closed-set
    // fallbacks (see the module docs).
    let rejected: [(usize, &[usize]); 4] = [
        (0, &[0]),
        (1, &[0, 0]),
        (2, &[2, 2, 2, 2, 3]),
        (3, &[0, 0, 0]),
    ];
    for (true_idx, fallbacks) in rejected {
        for &fallback in fallbacks {
            records.push(
                PredictionRecord::new(KKC_LABELS[true_idx], OpenPrediction::Unknown)
                    .with_closed_pred(KKC_LABELS[fallback]),
            );
        }
    }

    // Unknown-class records, split over the two unknown labels: u0 takes
    // the leaks into k0 and k1 plus five correct rejections, u1 the leaks
    // into k2 plus the other five.
    for _ in 0..2 {
        records.push(PredictionRecord::new(UUC_LABELS[0], OpenPrediction::known(KKC_LABELS[0])));
    }
    records.push(PredictionRecord::new(UUC_LABELS[0], OpenPrediction::known(KKC_LABELS[1])));
    for _ in 0..2 {
        records.push(PredictionRecord::new(UUC_LABELS[1], OpenPrediction::known(KKC_LABELS[2])));
    }
    for _ in 0..5 {
        records.push(PredictionRecord::new(UUC_LABELS[0], OpenPrediction::Unknown));
    }
    for _ in 0..5 {
        records.push(PredictionRecord::new(UUC_LABELS[1], OpenPrediction::Unknown));
    }

    records
}
