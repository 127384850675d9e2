//! A desk-scale reference recognizer and synthetic data to drive it.
//!
//! The recognizer is a nearest-centroid classifier whose per-class
//! supports are softmax-normalized exponentiated negative distances; it
//! rejects a sample as unknown when the top support falls below a
//! threshold. It is deliberately transparent: the point is to exercise
//! every downstream evaluation path (including false unknowns and false
//! knowns) without any training infrastructure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CountMatrix;
use crate::record::OpenPrediction;
use crate::scores::balanced_accuracy;
use crate::seeding::SeedStream;

/// Labeled feature vectors drawn from seeded Gaussian blobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticDataset {
    pub dim: usize,
    /// Per-class isotropic standard deviation.
    pub spread: f64,
    pub class_labels: Vec<String>,
    pub class_means: Vec<Vec<f64>>,
    /// `(feature vector, class index)` pairs, grouped by class.
    pub samples: Vec<(Vec<f64>, usize)>,
}

impl SyntheticDataset {
    pub fn label_of(&self, class_index: usize) -> &str {
        &self.class_labels[class_index]
    }

    /// Samples of one class, by index into `class_labels`.
    pub fn samples_of(&self, class_index: usize) -> impl Iterator<Item = &Vec<f64>> {
        self.samples
            .iter()
            .filter(move |(_, c)| *c == class_index)
            .map(|(x, _)| x)
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Places `k` class means pairwise at least `separation` apart (in units
/// of the unit spread):
///
/// * `dim >= k`: scaled orthogonal corners, all pairs exactly
///   `separation` apart;
/// * `dim == k - 1`: a centered regular simplex, likewise equidistant;
/// * otherwise: distinct nodes of an integer lattice with spacing
///   `separation`, chosen by a seeded draw.
///
/// The equidistant placements make held-out-class experiments symmetric:
/// whichever class plays the unknown one sits at the same distance from
/// every known centroid.
fn place_means(k: usize, dim: usize, separation: f64, rng: &mut SeedStream) -> Vec<Vec<f64>> {
    if dim >= k {
        let scale = separation / std::f64::consts::SQRT_2;
        return (0..k)
            .map(|i| {
                let mut mean = vec![0.0; dim];
                mean[i] = scale;
                mean
            })
            .collect();
    }
    if dim == k - 1 {
        // Vertices of the regular simplex via the Helmert basis of the
        // hyperplane orthogonal to (1, ..., 1) in R^k; pairwise distances
        // are sqrt(2) before scaling.
        let scale = separation / std::f64::consts::SQRT_2;
        return (0..k)
            .map(|i| {
                (1..k)
                    .map(|j| {
                        let norm = (j as f64 * (j as f64 + 1.0)).sqrt();
                        let coord = if i < j {
                            1.0 / norm
                        } else if i == j {
                            -(j as f64) / norm
                        } else {
                            0.0
                        };
                        coord * scale
                    })
                    .collect()
            })
            .collect();
    }
    // Lattice fallback: distinct integer nodes are at least one spacing
    // apart in euclidean distance.
    let mut side = 2usize;
    while side.pow(dim as u32) < k {
        side += 1;
    }
    let nodes = rng.sample_indices(side.pow(dim as u32), k);
    nodes
        .into_iter()
        .map(|mut node| {
            (0..dim)
                .map(|_| {
                    let coord = (node % side) as f64;
                    node /= side;
                    coord * separation
                })
                .collect()
        })
        .collect()
}

/// Generates `k_classes` Gaussian blobs of `per_class` samples each, with
/// unit spread and class means pairwise at least `separation` apart.
/// Fully determined by the seed.
pub fn generate_blobs(
    k_classes: usize,
    dim: usize,
    per_class: usize,
    separation: f64,
    seed: u64,
) -> Result<SyntheticDataset> {
    if k_classes < 2 {
        return Err(Error::InvalidShape("need at least two classes".into()));
    }
    if dim < 1 {
        return Err(Error::InvalidShape("need at least one dimension".into()));
    }
    if !(separation.is_finite() && separation > 0.0) {
        return Err(Error::InvalidShape("separation must be positive".into()));
    }
    let mut rng = SeedStream::new(seed);
    let class_means = place_means(k_classes, dim, separation, &mut rng);
    let class_labels = (0..k_classes).map(|i| format!("blob_{i}")).collect();

    let mut samples = Vec::with_capacity(k_classes * per_class);
    for (class_index, mean) in class_means.iter().enumerate() {
        for _ in 0..per_class {
            let x = mean.iter().map(|m| m + rng.next_normal()).collect();
            samples.push((x, class_index));
        }
    }
    Ok(SyntheticDataset {
        dim,
        spread: 1.0,
        class_labels,
        class_means,
        samples,
    })
}

/// Nearest-centroid open set recognizer with softmax-over-distances
/// scoring and top-score rejection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentroidModel {
    pub class_labels: Vec<String>,
    pub centroids: Vec<Vec<f64>>,
    pub temperature: f64,
    /// Rejection threshold on the normalized top score, in `[0, 1]`;
    /// 0 disables rejection.
    pub threshold: f64,
}

/// The recognizer's answer for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenSetPrediction {
    pub open_pred: OpenPrediction,
    pub closed_pred: String,
    /// Softmax-normalized supports, one per known class.
    pub scores: Vec<f64>,
}

/// Fits per-class centroids (feature means) on known-class training
/// samples: `(features, class index into labels)` pairs.
pub fn fit_centroid_model(
    labels: &[String],
    train: &[(Vec<f64>, usize)],
    temperature: f64,
    threshold: f64,
) -> Result<CentroidModel> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidParameter("temperature must be positive".into()));
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidParameter(
            "threshold must lie in [0, 1]".into(),
        ));
    }
    let dim = train
        .first()
        .map(|(x, _)| x.len())
        .ok_or_else(|| Error::InvalidShape("no training samples".into()))?;
    let mut sums = vec![vec![0.0; dim]; labels.len()];
    let mut counts = vec![0usize; labels.len()];
    for (x, class) in train {
        if x.len() != dim {
            return Err(Error::InvalidShape(format!(
                "feature length {} differs from {dim}",
                x.len()
            )));
        }
        sums[*class].iter_mut().zip(x).for_each(|(s, v)| *s += v);
        counts[*class] += 1;
    }
    let centroids = sums
        .into_iter()
        .zip(&counts)
        .zip(labels)
        .map(|((sum, &count), label)| {
            if count == 0 {
                return Err(Error::EmptyClass(label.clone()));
            }
            Ok(sum.into_iter().map(|s| s / count as f64).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(CentroidModel {
        class_labels: labels.to_vec(),
        centroids,
        temperature,
        threshold,
    })
}

impl CentroidModel {
    /// Pairs of classes whose centroids coincide; the recognizer cannot
    /// tell them apart, so a nonempty answer is worth a warning upstream.
    pub fn duplicate_centroids(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.centroids.len() {
            for j in i + 1..self.centroids.len() {
                if euclidean(&self.centroids[i], &self.centroids[j]) == 0.0 {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    /// Normalized supports for one sample: `exp(-d_j / temperature)`
    /// over the distances to each centroid, normalized to sum 1 (the
    /// smallest distance is subtracted before exponentiation for
    /// stability).
    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        let distances: Vec<f64> = self.centroids.iter().map(|c| euclidean(x, c)).collect();
        let d_min = distances.iter().copied().fold(f64::INFINITY, f64::min);
        let raw: Vec<f64> = distances
            .iter()
            .map(|d| (-(d - d_min) / self.temperature).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|r| r / total).collect()
    }

    /// Classifies one sample: closed-set prediction is the argmax class
    /// (lowest index on ties), accepted as the open-set prediction when
    /// its score reaches the threshold and rejected as unknown otherwise.
    pub fn predict_open(&self, x: &[f64]) -> OpenSetPrediction {
        let scores = self.scores(x);
        let best = crate::record::argmax_lowest(&scores);
        let closed_pred = self.class_labels[best].clone();
        let open_pred = if scores[best] >= self.threshold {
            OpenPrediction::Known(closed_pred.clone())
        } else {
            OpenPrediction::Unknown
        };
        OpenSetPrediction {
            open_pred,
            closed_pred,
            scores,
        }
    }
}

/// Grid-searches a rejection threshold on a known-class validation set:
/// `(features, class index)` pairs, scored by the halfpoint balanced
/// accuracy the model would reach on them. Among maximizing candidates
/// the largest threshold wins, i.e. the most willing to reject that the
/// validation set shows no reason to avoid.
pub fn tune_threshold(
    model: &CentroidModel,
    validation: &[(Vec<f64>, usize)],
    candidates: &[f64],
) -> Result<f64> {
    if validation.is_empty() {
        return Err(Error::InvalidShape("no validation samples".into()));
    }
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("no threshold candidates".into()));
    }
    let k = model.class_labels.len();
    // Scores are threshold-independent; compute once per sample.
    let predicted: Vec<(usize, f64)> = validation
        .iter()
        .map(|(x, _)| {
            let scores = model.scores(x);
            let best = crate::record::argmax_lowest(&scores);
            (best, scores[best])
        })
        .collect();

    let mut best_threshold = f64::NEG_INFINITY;
    let mut best_score = f64::NEG_INFINITY;
    for &threshold in candidates {
        let mut matrix = CountMatrix::zeros(k + 1);
        for ((_, truth), &(closed, top)) in validation.iter().zip(&predicted) {
            let col = if top >= threshold { closed } else { k };
            matrix.add(*truth, col, 1);
        }
        let halfpoint = balanced_accuracy(&matrix)?.value;
        if halfpoint > best_score || (halfpoint == best_score && threshold > best_threshold) {
            best_score = halfpoint;
            best_threshold = threshold;
        }
    }
    Ok(best_threshold)
}

/// The default candidate grid for [`tune_threshold`]: 0.00 to 0.95 in
/// steps of 0.05.
pub fn default_threshold_candidates() -> Vec<f64> {
    (0..20).map(|i| i as f64 * 0.05).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blobs_are_reproducible_and_separated() {
        let a = generate_blobs(4, 2, 50, 8.0, 11).unwrap();
        let b = generate_blobs(4, 2, 50, 8.0, 11).unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.samples.len(), 200);
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(euclidean(&a.class_means[i], &a.class_means[j]) >= 8.0 - 1e-9);
            }
        }
    }

    #[test]
    fn simplex_and_corner_placements_are_equidistant() {
        for (k, dim) in [(4usize, 3usize), (3, 2), (4, 4), (3, 5)] {
            let data = generate_blobs(k, dim, 1, 8.0, 5).unwrap();
            for i in 0..k {
                for j in i + 1..k {
                    let d = euclidean(&data.class_means[i], &data.class_means[j]);
                    assert!((d - 8.0).abs() < 1e-9, "k={k} dim={dim}: {d}");
                }
            }
        }
    }

    #[test]
    fn empty_per_class_is_valid() {
        let data = generate_blobs(3, 2, 0, 8.0, 1).unwrap();
        assert!(data.samples.is_empty());
        assert_eq!(data.class_means.len(), 3);
    }

    #[test]
    fn blob_shape_validation() {
        assert!(generate_blobs(1, 2, 5, 8.0, 1).is_err());
        assert!(generate_blobs(3, 0, 5, 8.0, 1).is_err());
        assert!(generate_blobs(3, 2, 5, 0.0, 1).is_err());
    }

    #[test]
    fn centroids_equal_single_samples() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let train = vec![(vec![1.0, 2.0], 0), (vec![-3.0, 0.5], 1)];
        let model = fit_centroid_model(&labels, &train, 1.0, 0.5).unwrap();
        assert_eq!(model.centroids[0], vec![1.0, 2.0]);
        assert_eq!(model.centroids[1], vec![-3.0, 0.5]);
        assert!(model.duplicate_centroids().is_empty());
    }

    #[test]
    fn identical_classes_are_flagged() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let train = vec![(vec![1.0], 0), (vec![1.0], 1)];
        let model = fit_centroid_model(&labels, &train, 1.0, 0.5).unwrap();
        assert_eq!(model.duplicate_centroids(), vec![(0, 1)]);
    }

    #[test]
    fn empty_class_is_an_error() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let train = vec![(vec![1.0], 0)];
        assert!(matches!(
            fit_centroid_model(&labels, &train, 1.0, 0.5).unwrap_err(),
            Error::EmptyClass(label) if label == "b"
        ));
    }

    #[test]
    fn centroid_estimate_tracks_true_mean() {
        // Standard error of a d-dimensional mean of n unit-spread points
        // is sqrt(d/n); 3 such deviations is a generous bound.
        let data = generate_blobs(4, 2, 50, 8.0, 23).unwrap();
        let train: Vec<(Vec<f64>, usize)> = data.samples.clone();
        let model = fit_centroid_model(&data.class_labels, &train, 1.0, 0.0).unwrap();
        let bound = 3.0 * (2.0_f64 / 50.0).sqrt();
        for (centroid, mean) in model.centroids.iter().zip(&data.class_means) {
            assert!(euclidean(centroid, mean) <= bound);
        }
    }

    #[test]
    fn sample_at_centroid_is_accepted() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let train = vec![(vec![0.0, 0.0], 0), (vec![20.0, 0.0], 1)];
        let model = fit_centroid_model(&labels, &train, 1.0, 0.5).unwrap();
        let pred = model.predict_open(&[0.0, 0.0]);
        assert_eq!(pred.open_pred, OpenPrediction::known("a"));
        assert_eq!(pred.closed_pred, "a");
    }

    #[test]
    fn equidistant_sample_scores_uniformly_and_is_rejected() {
        let labels: Vec<String> = (0..4).map(|i| format!("c{i}")).collect();
        let train = vec![
            (vec![1.0, 0.0, 0.0, 0.0], 0),
            (vec![0.0, 1.0, 0.0, 0.0], 1),
            (vec![0.0, 0.0, 1.0, 0.0], 2),
            (vec![0.0, 0.0, 0.0, 1.0], 3),
        ];
        let model = fit_centroid_model(&labels, &train, 1.0, 0.3).unwrap();
        let pred = model.predict_open(&[0.0; 4]);
        for &s in &pred.scores {
            assert!((s - 0.25).abs() < 1e-12);
        }
        assert_eq!(pred.open_pred, OpenPrediction::Unknown);
        // Any threshold at or below 1/K accepts instead.
        let lenient = CentroidModel {
            threshold: 0.25,
            ..model
        };
        assert_eq!(
            lenient.predict_open(&[0.0; 4]).open_pred,
            OpenPrediction::known("c0")
        );
    }

    #[test]
    fn zero_threshold_never_rejects() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let train = vec![(vec![0.0], 0), (vec![8.0], 1)];
        let model = fit_centroid_model(&labels, &train, 1.0, 0.0).unwrap();
        let mut rng = SeedStream::new(1);
        for _ in 0..100 {
            let x = [rng.next_normal() * 30.0];
            let pred = model.predict_open(&x);
            assert_eq!(pred.open_pred, OpenPrediction::Known(pred.closed_pred.clone()));
        }
    }

    #[test]
    fn scores_form_a_probability_vector() {
        let labels: Vec<String> = (0..3).map(|i| format!("c{i}")).collect();
        let train = vec![(vec![0.0, 0.0], 0), (vec![5.0, 1.0], 1), (vec![-2.0, 4.0], 2)];
        let model = fit_centroid_model(&labels, &train, 0.7, 0.5).unwrap();
        let mut rng = SeedStream::new(2);
        for _ in 0..200 {
            let x = [rng.next_normal() * 10.0, rng.next_normal() * 10.0];
            let scores = model.scores(&x);
            assert!(scores.iter().all(|&s| s >= 0.0));
            assert!((scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tuned_threshold_prefers_the_largest_harmless_candidate() {
        // Two tight blobs far apart: every validation top score is very
        // high, so all small candidates tie at halfpoint 1 and the
        // largest of them is returned.
        let data = generate_blobs(2, 2, 40, 10.0, 3).unwrap();
        let model = fit_centroid_model(&data.class_labels, &data.samples, 1.0, 0.0).unwrap();
        let tuned = tune_threshold(&model, &data.samples, &default_threshold_candidates()).unwrap();
        assert!(tuned >= 0.9, "tuned threshold {tuned}");
    }
}
