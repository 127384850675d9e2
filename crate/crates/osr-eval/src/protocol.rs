//! Openness computation and seeded generation of known/unknown split
//! plans under the holdout and outlier protocols.
//!
//! A plan fixes, for every (class-cardinality configuration, repetition)
//! pair, which labels play the known classes and which the unknown ones,
//! plus a per-entry fold seed for stratified cross-validation. Plans are
//! pure functions of their inputs and the master seed: serialized twice,
//! they are byte-identical, and entries may be generated in any order
//! because each one draws from its own sub-seeded stream (see
//! [`crate::seeding`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding::{label_hash, sub_seed, SeedStream};

/// Stream role tags; part of the frozen sub-seeding scheme.
const ROLE_HOLDOUT_DRAW: u64 = 0x484f_4c44; // "HOLD"
const ROLE_OUTLIER_KKC: u64 = 0x4f4b_4b43; // "OKKC"
const ROLE_OUTLIER_UUC: u64 = 0x4f55_5543; // "OUUC"
const ROLE_FOLD: u64 = 0x464f_4c44; // "FOLD"

/// A class-cardinality configuration with its openness annotation.
///
/// Openness depends only on how many classes are known versus unknown,
/// not on how many samples they contribute: `1 - sqrt(2k / (2k + u))`
/// for `k` known and `u` unknown classes. It is 0 exactly for a closed
/// problem and grows toward (never reaching) 1 as unknown classes are
/// added.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpennessConfig {
    pub n_kkc: u32,
    pub n_uuc: u32,
    pub openness: f64,
}

impl OpennessConfig {
    pub fn new(n_kkc: u32, n_uuc: u32) -> Result<Self> {
        Ok(Self {
            n_kkc,
            n_uuc,
            openness: openness(n_kkc, n_uuc)?,
        })
    }
}

/// Openness of a configuration with `n_kkc` known and `n_uuc` unknown
/// classes.
pub fn openness(n_kkc: u32, n_uuc: u32) -> Result<f64> {
    if n_kkc < 1 {
        return Err(Error::InvalidCount(
            "a configuration needs at least one known class".into(),
        ));
    }
    let k = f64::from(n_kkc);
    let u = f64::from(n_uuc);
    Ok(1.0 - (2.0 * k / (2.0 * k + u)).sqrt())
}

/// Enumerates class-cardinality configurations, sorted by ascending
/// openness (ties broken by ascending known-class count).
///
/// Without a budget the grid runs over `2..=max_kkc` x `2..=max_uuc`,
/// the shape used for baseline-simulation grids. With a class budget
/// (one dataset supplying both sides, as under the holdout protocol) all
/// pairs with `n_kkc >= 1`, `n_uuc >= 1`, and `n_kkc + n_uuc <= budget`
/// are kept instead, still capped by the axis maxima.
pub fn enumerate_configs(
    max_kkc: u32,
    max_uuc: u32,
    dataset_class_budget: Option<u32>,
) -> Vec<OpennessConfig> {
    let min = if dataset_class_budget.is_some() { 1 } else { 2 };
    let mut configs = Vec::new();
    for n_kkc in min..=max_kkc {
        for n_uuc in min..=max_uuc {
            if let Some(budget) = dataset_class_budget {
                if n_kkc + n_uuc > budget {
                    continue;
                }
            }
            configs.push(OpennessConfig::new(n_kkc, n_uuc).expect("n_kkc >= 1"));
        }
    }
    configs.sort_by(|a, b| {
        a.openness
            .total_cmp(&b.openness)
            .then(a.n_kkc.cmp(&b.n_kkc))
    });
    configs
}

/// How known and unknown classes are sourced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    /// Disjoint class subsets of one dataset.
    Holdout,
    /// Known classes from one dataset, unknown ones from another.
    Outlier,
}

/// One experimental problem: a configuration, a repetition, and the
/// drawn label sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub config_index: u32,
    pub repetition: u32,
    pub n_kkc: u32,
    pub n_uuc: u32,
    pub openness: f64,
    pub kkc_labels: Vec<String>,
    pub uuc_labels: Vec<String>,
    /// Seed for materializing stratified fold assignments once per-class
    /// sample counts are known; see [`SplitPlan::fold_assignment`].
    pub fold_seed: u64,
}

/// A seeded experimental split plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    /// Schema identifier embedded in every serialized plan.
    pub schema: String,
    pub protocol: ProtocolKind,
    pub seed: u64,
    pub repetitions: u32,
    pub folds: u32,
    pub entries: Vec<PlanEntry>,
}

pub const SPLIT_PLAN_SCHEMA: &str = "osr-eval/split-plan/v1";

impl SplitPlan {
    /// Stratified fold assignment for `n_samples` samples of one class:
    /// a fold index per sample index, each fold receiving as equal a
    /// share as possible. Deterministic in (entry fold seed, label).
    pub fn fold_assignment(&self, entry: &PlanEntry, label: &str, n_samples: usize) -> Vec<u32> {
        stratified_fold_assignment(
            n_samples,
            self.folds,
            sub_seed(entry.fold_seed, &[label_hash(label)]),
        )
    }
}

/// Shuffles sample indices and deals them round-robin into `folds`
/// folds, returning the fold index of each sample.
pub fn stratified_fold_assignment(n_samples: usize, folds: u32, seed: u64) -> Vec<u32> {
    assert!(folds >= 1, "fold count must be positive");
    let mut order: Vec<usize> = (0..n_samples).collect();
    let mut rng = SeedStream::new(seed);
    rng.partial_shuffle(&mut order, n_samples);
    let mut assignment = vec![0u32; n_samples];
    for (position, &sample) in order.iter().enumerate() {
        assignment[sample] = (position % folds as usize) as u32;
    }
    assignment
}

fn check_common(repetitions: u32, folds: u32) -> Result<()> {
    if repetitions < 1 {
        return Err(Error::InvalidParameter("repetitions must be positive".into()));
    }
    if folds < 1 {
        return Err(Error::InvalidParameter("folds must be positive".into()));
    }
    Ok(())
}

fn check_distinct(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for label in labels {
        if !seen.insert(label) {
            return Err(Error::InvalidParameter(format!(
                "duplicate class label `{label}` in source list"
            )));
        }
    }
    Ok(())
}

/// Generates a holdout-protocol plan: for every configuration and
/// repetition, disjoint known and unknown label sets are drawn uniformly
/// without replacement from one class list.
///
/// The draw for entry `(c, r)` comes from the stream keyed by
/// `(seed, c, r, role)`, so entries are independent of generation order
/// and of how many other entries exist.
pub fn holdout_plan(
    class_labels: &[String],
    configs: &[(u32, u32)],
    repetitions: u32,
    folds: u32,
    seed: u64,
) -> Result<SplitPlan> {
    check_common(repetitions, folds)?;
    check_distinct(class_labels)?;
    let mut entries = Vec::with_capacity(configs.len() * repetitions as usize);
    for (config_index, &(n_kkc, n_uuc)) in configs.iter().enumerate() {
        let config = OpennessConfig::new(n_kkc, n_uuc)?;
        let needed = (n_kkc + n_uuc) as usize;
        if needed > class_labels.len() {
            return Err(Error::InsufficientClasses {
                needed,
                available: class_labels.len(),
            });
        }
        for repetition in 0..repetitions {
            let context = [config_index as u64, u64::from(repetition), ROLE_HOLDOUT_DRAW];
            let mut rng = SeedStream::for_context(seed, &context);
            let drawn = rng.sample_indices(class_labels.len(), needed);
            let kkc_labels: Vec<String> = drawn[..n_kkc as usize]
                .iter()
                .map(|&i| class_labels[i].clone())
                .collect();
            let uuc_labels: Vec<String> = drawn[n_kkc as usize..]
                .iter()
                .map(|&i| class_labels[i].clone())
                .collect();
            entries.push(PlanEntry {
                config_index: config_index as u32,
                repetition,
                n_kkc,
                n_uuc,
                openness: config.openness,
                kkc_labels,
                uuc_labels,
                fold_seed: sub_seed(seed, &[config_index as u64, u64::from(repetition), ROLE_FOLD]),
            });
        }
    }
    Ok(SplitPlan {
        schema: SPLIT_PLAN_SCHEMA.into(),
        protocol: ProtocolKind::Holdout,
        seed,
        repetitions,
        folds,
        entries,
    })
}

/// Generates an outlier-protocol plan: known classes drawn from one
/// source list, unknown classes from another. The two lists must not
/// share labels; callers with clashing labels should namespace them per
/// source.
pub fn outlier_plan(
    kkc_source_labels: &[String],
    uuc_source_labels: &[String],
    configs: &[(u32, u32)],
    repetitions: u32,
    folds: u32,
    seed: u64,
) -> Result<SplitPlan> {
    check_common(repetitions, folds)?;
    check_distinct(kkc_source_labels)?;
    check_distinct(uuc_source_labels)?;
    let kkc_set: std::collections::HashSet<&String> = kkc_source_labels.iter().collect();
    if let Some(shared) = uuc_source_labels.iter().find(|l| kkc_set.contains(l)) {
        return Err(Error::OverlappingSources(shared.clone()));
    }
    let mut entries = Vec::with_capacity(configs.len() * repetitions as usize);
    for (config_index, &(n_kkc, n_uuc)) in configs.iter().enumerate() {
        let config = OpennessConfig::new(n_kkc, n_uuc)?;
        if n_kkc as usize > kkc_source_labels.len() {
            return Err(Error::InsufficientClasses {
                needed: n_kkc as usize,
                available: kkc_source_labels.len(),
            });
        }
        if n_uuc as usize > uuc_source_labels.len() {
            return Err(Error::InsufficientClasses {
                needed: n_uuc as usize,
                available: uuc_source_labels.len(),
            });
        }
        for repetition in 0..repetitions {
            let index_words = [config_index as u64, u64::from(repetition)];
            let mut kkc_rng =
                SeedStream::for_context(seed, &[index_words[0], index_words[1], ROLE_OUTLIER_KKC]);
            let mut uuc_rng =
                SeedStream::for_context(seed, &[index_words[0], index_words[1], ROLE_OUTLIER_UUC]);
            let kkc_labels: Vec<String> = kkc_rng
                .sample_indices(kkc_source_labels.len(), n_kkc as usize)
                .into_iter()
                .map(|i| kkc_source_labels[i].clone())
                .collect();
            let uuc_labels: Vec<String> = uuc_rng
                .sample_indices(uuc_source_labels.len(), n_uuc as usize)
                .into_iter()
                .map(|i| uuc_source_labels[i].clone())
                .collect();
            entries.push(PlanEntry {
                config_index: config_index as u32,
                repetition,
                n_kkc,
                n_uuc,
                openness: config.openness,
                kkc_labels,
                uuc_labels,
                fold_seed: sub_seed(seed, &[index_words[0], index_words[1], ROLE_FOLD]),
            });
        }
    }
    Ok(SplitPlan {
        schema: SPLIT_PLAN_SCHEMA.into(),
        protocol: ProtocolKind::Outlier,
        seed,
        repetitions,
        folds,
        entries,
    })
}
