//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    /// Catalog construction rejected the label sets.
    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),

    /// A record's true label is not present in the catalog.
    #[error("record {index}: true label `{label}` is not in the catalog")]
    UnknownLabel { index: usize, label: String },

    /// A record's open-set prediction is not present in the catalog.
    #[error("record {index}: open-set prediction `{label}` is not in the catalog")]
    UnknownPredLabel { index: usize, label: String },

    /// A record's open-set prediction names an unknown-unknown class;
    /// models can only answer with a known class or the unknown marker.
    #[error("record {index}: open-set prediction `{label}` names an unknown-unknown class")]
    UucPrediction { index: usize, label: String },

    /// A record's closed-set prediction is not a known class.
    #[error("record {index}: closed-set prediction `{label}` is not a known class")]
    InvalidClosedPred { index: usize, label: String },

    /// A score vector does not have one entry per known class.
    #[error("record {index}: score vector has {got} entries, expected {expected}")]
    ScoreLengthMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },

    /// A score vector contains a negative or non-finite value.
    #[error("record {index}: {reason}")]
    InvalidScore { index: usize, reason: String },

    /// A known-class record was rejected as unknown but carries neither a
    /// closed-set prediction nor scores to fall back on.
    #[error(
        "record {index}: rejected as unknown with no closed-set prediction or scores to fall back on"
    )]
    MissingClosedPred { index: usize },

    /// A metric was requested on a matrix with no populated rows.
    #[error("matrix has no rows with support")]
    NoSupport,

    /// A class-count argument is out of range.
    #[error("invalid class count: {0}")]
    InvalidCount(String),

    /// A split plan asked for more classes than a source provides.
    #[error("need {needed} classes, only {available} available")]
    InsufficientClasses { needed: usize, available: usize },

    /// The two sources of an outlier plan share labels.
    #[error("source label sets overlap on `{0}`; disambiguate labels per source")]
    OverlappingSources(String),

    /// A class has no training samples.
    #[error("class `{0}` has no training samples")]
    EmptyClass(String),

    /// A dataset or model shape argument is invalid.
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// A scalar parameter is out of its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
