//! Exactness tests on the worked reference example: every derived matrix
//! cell-for-cell, and every score against hand-computed arithmetic.

use osr_eval::matrix::{build_general_matrix, CountMatrix, GeneralConfusionMatrix};
use osr_eval::record::validate_records;
use osr_eval::reference;
use osr_eval::scores::{
    accuracy, balanced_accuracy, derive_halfpoint_matrix, derive_inner_matrix,
    derive_outer_matrix, derive_overall_matrix, f1_binary, score_suite, BaseMetric,
};
use osr_eval::ValidatedRecords;

fn validated() -> ValidatedRecords {
    validate_records(&reference::records(), &reference::catalog()).unwrap()
}

const GENERAL_ROWS: [[u64; 5]; 5] = [
    [10, 3, 0, 2, 1],
    [1, 12, 0, 0, 2],
    [0, 0, 9, 1, 5],
    [1, 1, 0, 10, 3],
    [2, 1, 2, 0, 10],
];

fn expected_general() -> GeneralConfusionMatrix {
    GeneralConfusionMatrix::from_rows(
        reference::KKC_LABELS.iter().map(|s| s.to_string()).collect(),
        &GENERAL_ROWS.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
    )
    .unwrap()
}

#[test]
fn record_counts_split_61_known_15_unknown() {
    let validated = validated();
    assert_eq!(validated.len(), 76);
    assert_eq!(validated.kkc_true_count(), 61);
    assert_eq!(validated.uuc_true_count(), 15);
}

#[test]
fn general_matrix_is_cell_exact() {
    let general = build_general_matrix(&validated());
    assert_eq!(general, expected_general());
}

#[test]
fn region_sums_are_50_11_5_10() {
    let general = build_general_matrix(&validated());
    assert_eq!(general.kkc_block_total(), 50);
    assert_eq!(general.false_unknown_count(), 11);
    assert_eq!(general.false_known_count(), 5);
    assert_eq!(general.get(4, 4), 10);
    assert_eq!(general.total(), 76);
}

#[test]
fn inner_matrix_is_cell_exact() {
    let inner = derive_inner_matrix(&validated()).unwrap();
    let expected = CountMatrix::from_rows(&[
        vec![11, 3, 0, 2],
        vec![3, 12, 0, 0],
        vec![0, 0, 13, 2],
        vec![4, 1, 0, 10],
    ])
    .unwrap();
    assert_eq!(inner, expected);
    assert_eq!(inner.total(), 61);
}

#[test]
fn outer_matrix_is_cell_exact() {
    let outer = derive_outer_matrix(&build_general_matrix(&validated()));
    assert_eq!(outer.true_positives, 50);
    assert_eq!(outer.false_negatives, 11);
    assert_eq!(outer.false_positives, 5);
    assert_eq!(outer.true_negatives, 10);
    assert_eq!(outer.total(), 76);
}

#[test]
fn halfpoint_matrix_is_cell_exact() {
    let halfpoint = derive_halfpoint_matrix(&build_general_matrix(&validated()));
    let expected = CountMatrix::from_rows(&[
        vec![10, 3, 0, 2, 1],
        vec![1, 12, 0, 0, 2],
        vec![0, 0, 9, 1, 5],
        vec![1, 1, 0, 10, 3],
        vec![0, 0, 0, 0, 0],
    ])
    .unwrap();
    assert_eq!(halfpoint, expected);
}

#[test]
fn overall_matrix_equals_general() {
    let general = build_general_matrix(&validated());
    assert_eq!(&derive_overall_matrix(&general), general.counts());
}

// Expected balanced accuracies, by hand:
//   inner     = mean(11/16, 12/15, 13/15, 10/15)       = 0.755208...
//   outer     = mean(50/61, 10/15)                     = 0.743169...
//   halfpoint = mean(10/16, 12/15, 9/15, 10/15)        = 0.672917...
//   overall   = mean(10/16, 12/15, 9/15, 10/15, 10/15) = 0.671667...
#[test]
fn balanced_accuracy_suite_matches_hand_arithmetic() {
    let suite = score_suite(&validated(), BaseMetric::BalancedAccuracy).unwrap();
    assert!((suite.inner.unwrap() - 0.7552).abs() < 1e-4, "{suite:?}");
    assert!((suite.outer - 0.7432).abs() < 1e-4);
    assert!((suite.halfpoint.unwrap() - 0.6729).abs() < 1e-4);
    assert!((suite.overall.unwrap() - 0.6717).abs() < 1e-4);
    assert_eq!(suite.diagnostics.false_unknowns, 11);
    assert_eq!(suite.diagnostics.false_knowns, 5);
    assert!((suite.diagnostics.imbalance_ratio.unwrap() - 61.0 / 15.0).abs() < 1e-12);
}

#[test]
fn halfpoint_mean_excludes_the_zero_row() {
    let halfpoint = derive_halfpoint_matrix(&build_general_matrix(&validated()));
    let bac = balanced_accuracy(&halfpoint).unwrap();
    assert_eq!(bac.excluded_rows, 1);
    assert!((bac.value - 0.6729).abs() < 1e-4);
}

#[test]
fn outer_accuracy_and_f1_match_hand_arithmetic() {
    // accuracy = 60/76 = 0.789473...; precision = 50/55, recall = 50/61,
    // F1 = 2PR/(P+R) = 0.862068...
    let outer = derive_outer_matrix(&build_general_matrix(&validated()));
    assert!((accuracy(&outer.as_count_matrix()).unwrap() - 0.7895).abs() < 1e-4);
    let f1 = f1_binary(&outer);
    assert!((f1.value - 0.8621).abs() < 1e-4);
    assert!((f1.precision - 50.0 / 55.0).abs() < 1e-12);
    assert!((f1.recall - 50.0 / 61.0).abs() < 1e-12);
}

#[test]
fn all_unknown_predictor_scores_zero_halfpoint_and_one_third_overall() {
    use osr_eval::catalog::ClassCatalog;
    use osr_eval::record::{OpenPrediction, PredictionRecord};

    let catalog = ClassCatalog::new(["a", "b"], ["u0", "u1"]).unwrap();
    let mut records = Vec::new();
    for (label, count) in [("a", 3), ("b", 2), ("u0", 2), ("u1", 1)] {
        for _ in 0..count {
            records.push(
                PredictionRecord::new(label, OpenPrediction::Unknown).with_closed_pred("a"),
            );
        }
    }
    let validated = validate_records(&records, &catalog).unwrap();
    let suite = score_suite(&validated, BaseMetric::BalancedAccuracy).unwrap();
    assert!((suite.halfpoint.unwrap() - 0.0).abs() < 1e-9);
    assert!((suite.overall.unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(suite.outer, 0.5);
}
