//! Model-agnostic evaluation of open set recognition (OSR) systems under
//! known/unknown class imbalance.
//!
//! An OSR system classifies among the classes it was trained on (the
//! known known classes, KKC) while rejecting samples of classes it never
//! saw (the unknown unknown classes, UUC). Evaluating one quantity hides
//! the other, so this crate derives four scores from a single set of
//! prediction records:
//!
//! * **Inner**: closed-set quality over known-class records, with
//!   rejected records rerouted to their closed-set fallback;
//! * **Outer**: the binary known-vs-unknown dichotomy;
//! * **Halfpoint**: closed-set quality that penalizes false unknowns;
//! * **Overall**: all classes at once, the unknowns aggregated as one
//!   extra category.
//!
//! Balanced accuracy is the recommended base metric: under random
//! prediction it stays near 0.5 whatever the known/unknown sample ratio,
//! while F1 and plain accuracy drift with the imbalance; the
//! [`simulate`] module quantifies exactly that. The [`protocol`] module
//! generates seeded, byte-reproducible experiment plans over a range of
//! openness values, and [`recognizers`] provides a small nearest-centroid
//! recognizer plus synthetic data so the whole pipeline runs end to end
//! without any external ML stack.
//!
//! # Determinism
//!
//! All randomness flows through [`seeding`]: SplitMix64 streams keyed by
//! a master seed and context words. Identical inputs and seeds give
//! identical outputs on every platform, with or without the `parallel`
//! feature.
//!
//! # Features
//!
//! * `parallel` (default): run record folding and simulation trials on
//!   the rayon thread pool. Results are bit-identical to the sequential
//!   build; the `parallel_vs_sequential` bench compares the two.

pub mod catalog;
pub mod error;
mod exec;
pub mod matrix;
pub mod protocol;
pub mod recognizers;
pub mod record;
pub mod reference;
pub mod scores;
pub mod seeding;
pub mod simulate;

pub use catalog::ClassCatalog;
pub use error::{Error, Result};
pub use matrix::{
    build_general_matrix, build_general_matrix_sequential, BinaryConfusionMatrix, CountMatrix,
    GeneralConfusionMatrix,
};
pub use record::{
    validate_records, OpenPrediction, PredictionRecord, ValidatedRecords, UNKNOWN_SENTINEL,
};
pub use scores::{score_suite, BaseMetric, ScoreSuite};
