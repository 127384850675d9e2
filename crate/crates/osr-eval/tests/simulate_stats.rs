//! Statistical behavior of the random-prediction baseline, checked
//! against closed forms and a brute-force outcome-enumeration oracle.

use osr_eval::matrix::BinaryConfusionMatrix;
use osr_eval::scores::{accuracy, balanced_accuracy, f1_binary};
use osr_eval::seeding::SeedStream;
use osr_eval::simulate::{
    random_baseline_study, random_baseline_study_sequential, random_outer_trial,
    RandomPredictorMode,
};

fn bac_of(m: &BinaryConfusionMatrix) -> f64 {
    balanced_accuracy(&m.as_count_matrix()).unwrap().value
}

/// Exact E[accuracy] of a guessing predictor that answers "positive" with
/// probability `p` on `n_pos` positives and `n_neg` negatives, by
/// enumerating all 2^(n_pos + n_neg) outcome assignments weighted by
/// their probability. Only feasible for tiny inputs; that is the point.
fn enumerated_expected_accuracy(n_pos: u32, n_neg: u32, p: f64) -> f64 {
    let n = n_pos + n_neg;
    assert!(n <= 20, "enumeration is exponential");
    let mut expectation = 0.0;
    for assignment in 0u32..(1 << n) {
        let ones = assignment.count_ones();
        let weight = p.powi(ones as i32) * (1.0 - p).powi((n - ones) as i32);
        let tp = (assignment & ((1 << n_pos) - 1)).count_ones();
        let fp = (assignment >> n_pos).count_ones();
        let correct = tp + (n_neg - fp);
        expectation += weight * f64::from(correct) / f64::from(n);
    }
    expectation
}

#[test]
fn default_half_balanced_accuracy_centers_on_half() {
    // E[BAC] = (p + 1 - p) / 2 = 1/2 for any guessing probability; the
    // sample mean over T trials must sit within 3 empirical standard
    // errors of it.
    let trials = 1000;
    let mut values = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = SeedStream::for_context(7, &[t as u64]);
        let m = random_outer_trial(10_000, 10_000, RandomPredictorMode::DefaultHalf, &mut rng);
        values.push(bac_of(&m));
    }
    let mean = values.iter().sum::<f64>() / trials as f64;
    let sd = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / trials as f64).sqrt();
    let tolerance = (3.0 * sd / (trials as f64).sqrt()).max(1e-4);
    assert!((mean - 0.5).abs() < tolerance, "mean {mean}, sd {sd}");
    assert!((mean - 0.5).abs() < 0.01);
}

#[test]
fn prior_aware_balanced_accuracy_also_centers_on_half() {
    // The prior-aware guesser lifts its true-positive rate to q but pays
    // on the negative side: E[TPR] = q, E[TNR] = 1 - q.
    let trials = 1000;
    let mut sum = 0.0;
    for t in 0..trials {
        let mut rng = SeedStream::for_context(13, &[t as u64]);
        let m = random_outer_trial(1600, 100, RandomPredictorMode::PriorAware, &mut rng);
        sum += bac_of(&m);
    }
    let mean = sum / trials as f64;
    assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
}

#[test]
fn prior_aware_f1_tracks_the_positive_fraction() {
    // With q = 16/17 both precision and recall concentrate near q, so
    // F1 does too; a guesser scores far above 80% without any skill.
    let trials = 1000;
    let q = 16.0 / 17.0;
    let mut sum = 0.0;
    for t in 0..trials {
        let mut rng = SeedStream::for_context(29, &[t as u64]);
        let m = random_outer_trial(1600, 100, RandomPredictorMode::PriorAware, &mut rng);
        sum += f1_binary(&m).value;
    }
    let mean = sum / trials as f64;
    assert!(mean > 0.8, "mean F1 {mean}");
    assert!((mean - q).abs() < 0.02, "mean F1 {mean} vs q {q}");
}

#[test]
fn prior_aware_accuracy_matches_enumeration_oracle() {
    // q^2 + (1-q)^2 is the closed form; the enumeration oracle must agree
    // with it to machine precision, and the empirical mean over 1e5
    // trials with it to one percent.
    let (n_pos, n_neg) = (5u32, 7u32);
    let q = f64::from(n_pos) / f64::from(n_pos + n_neg);
    let exact = enumerated_expected_accuracy(n_pos, n_neg, q);
    assert!((exact - (q * q + (1.0 - q) * (1.0 - q))).abs() < 1e-12);

    let trials = 100_000;
    let mut sum = 0.0;
    for t in 0..trials {
        let mut rng = SeedStream::for_context(31, &[t as u64]);
        let m = random_outer_trial(
            u64::from(n_pos),
            u64::from(n_neg),
            RandomPredictorMode::PriorAware,
            &mut rng,
        );
        sum += accuracy(&m.as_count_matrix()).unwrap();
    }
    let empirical = sum / trials as f64;
    assert!((empirical - exact).abs() < 0.01, "empirical {empirical}, exact {exact}");
}

#[test]
fn prior_aware_accuracy_is_minimized_at_balance() {
    // Over a grid of positive fractions, the enumerated expectation dips
    // at q = 1/2 and rises toward both ends.
    let balanced = enumerated_expected_accuracy(5, 5, 0.5);
    for (n_pos, n_neg) in [(1u32, 9u32), (2, 8), (8, 2), (9, 1)] {
        let q = f64::from(n_pos) / 10.0;
        let skewed = enumerated_expected_accuracy(n_pos, n_neg, q);
        assert!(skewed > balanced, "q={q}: {skewed} <= {balanced}");
    }
}

#[test]
fn prior_aware_f1_increases_with_positive_fraction() {
    // Study-level restatement of the bias: mean F1 grows with q along a
    // grid that shifts mass from unknown to known classes.
    let grid = [(2u32, 1000u32), (2, 100), (2, 10), (2, 2), (10, 2), (100, 2)];
    let report =
        random_baseline_study(&grid, 20, 300, RandomPredictorMode::PriorAware, 47).unwrap();
    let f1_means: Vec<f64> = report.cells.iter().map(|c| c.metrics[0].mean).collect();
    for pair in f1_means.windows(2) {
        assert!(
            pair[0] < pair[1],
            "F1 means not increasing with positive fraction: {f1_means:?}"
        );
    }
}

#[test]
fn default_half_study_keeps_bac_near_half_everywhere() {
    let grid = [(2u32, 2u32), (2, 10), (2, 100), (2, 1000)];
    let report =
        random_baseline_study(&grid, 20, 1000, RandomPredictorMode::DefaultHalf, 3).unwrap();
    for cell in &report.cells {
        let bac = &cell.metrics[2];
        assert_eq!(bac.metric.name(), "balanced_accuracy");
        assert!(
            (0.48..=0.52).contains(&bac.mean),
            "cell ({}, {}): BAC mean {}",
            cell.n_kkc_classes,
            cell.n_uuc_classes,
            bac.mean
        );
    }
    // In the balanced cell a fair coin centers every metric on 1/2.
    let balanced = &report.cells[0];
    for metric in &balanced.metrics {
        assert!(
            (0.48..=0.52).contains(&metric.mean),
            "balanced cell, {}: mean {}",
            metric.metric.name(),
            metric.mean
        );
    }
}

#[test]
fn rare_positives_depress_f1_but_not_accuracy() {
    // In the (2 known, 1000 unknown) cell the positives are ~0.2% of the
    // test set: a fair-coin guesser still lands accuracy near 1/2 while
    // F1 collapses.
    let report = random_baseline_study(
        &[(2, 1000)],
        20,
        400,
        RandomPredictorMode::DefaultHalf,
        11,
    )
    .unwrap();
    let cell = &report.cells[0];
    let f1_mean = cell.metrics[0].mean;
    let acc_mean = cell.metrics[1].mean;
    assert!((acc_mean - 0.5).abs() < 0.02, "accuracy {acc_mean}");
    assert!(f1_mean < 0.05, "f1 {f1_mean}");
}

#[test]
fn study_runs_are_reproducible() {
    let grid = [(2u32, 2u32), (4, 10)];
    let a = random_baseline_study(&grid, 20, 1, RandomPredictorMode::PriorAware, 5).unwrap();
    let b = random_baseline_study(&grid, 20, 1, RandomPredictorMode::PriorAware, 5).unwrap();
    assert_eq!(a, b);
    let seq =
        random_baseline_study_sequential(&grid, 20, 1, RandomPredictorMode::PriorAware, 5)
            .unwrap();
    assert_eq!(a, seq);
}
