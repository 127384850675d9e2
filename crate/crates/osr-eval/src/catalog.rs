//! Class catalogs: which labels are known classes and which stand in for
//! the unknown ones during evaluation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::UNKNOWN_SENTINEL;

/// Where a label sits in the recognition problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelRole {
    /// Known class, with its index in the catalog's known-label order.
    Known(usize),
    /// Unknown-unknown class, with its index in the unknown-label order.
    Unknown(usize),
}

/// The label sets defining one open set recognition problem: known
/// classes (trained on) and unknown-unknown classes (test-time only).
///
/// Labels are strings rather than integers so that catalogs drawn from
/// two datasets with clashing numeric labels stay unambiguous.
#[derive(Debug, Clone, Serialize)]
pub struct ClassCatalog {
    kkc: Vec<String>,
    uuc: Vec<String>,
    #[serde(skip)]
    roles: HashMap<String, LabelRole>,
}

impl ClassCatalog {
    /// Builds a catalog, checking that known labels are nonempty, that no
    /// label repeats, that the two sets are disjoint, and that the
    /// reserved unknown marker is not used as a label.
    pub fn new<K, U>(kkc: K, uuc: U) -> Result<Self>
    where
        K: IntoIterator,
        K::Item: Into<String>,
        U: IntoIterator,
        U::Item: Into<String>,
    {
        let kkc: Vec<String> = kkc.into_iter().map(Into::into).collect();
        let uuc: Vec<String> = uuc.into_iter().map(Into::into).collect();
        if kkc.is_empty() {
            return Err(Error::InvalidCatalog("no known classes".into()));
        }
        let mut roles = HashMap::with_capacity(kkc.len() + uuc.len());
        for (i, label) in kkc.iter().enumerate() {
            if label == UNKNOWN_SENTINEL {
                return Err(Error::InvalidCatalog(format!(
                    "`{UNKNOWN_SENTINEL}` is reserved and cannot be a class label"
                )));
            }
            if roles.insert(label.clone(), LabelRole::Known(i)).is_some() {
                return Err(Error::InvalidCatalog(format!("duplicate label `{label}`")));
            }
        }
        for (i, label) in uuc.iter().enumerate() {
            if label == UNKNOWN_SENTINEL {
                return Err(Error::InvalidCatalog(format!(
                    "`{UNKNOWN_SENTINEL}` is reserved and cannot be a class label"
                )));
            }
            if roles.insert(label.clone(), LabelRole::Unknown(i)).is_some() {
                return Err(Error::InvalidCatalog(format!("duplicate label `{label}`")));
            }
        }
        Ok(Self { kkc, uuc, roles })
    }

    /// Number of known classes.
    pub fn k(&self) -> usize {
        self.kkc.len()
    }

    pub fn kkc_labels(&self) -> &[String] {
        &self.kkc
    }

    pub fn uuc_labels(&self) -> &[String] {
        &self.uuc
    }

    pub fn role_of(&self, label: &str) -> Option<LabelRole> {
        self.roles.get(label).copied()
    }

    /// Index of a known label, if it is one.
    pub fn known_index(&self, label: &str) -> Option<usize> {
        match self.role_of(label)? {
            LabelRole::Known(i) => Some(i),
            LabelRole::Unknown(_) => None,
        }
    }
}

impl<'de> Deserialize<'de> for ClassCatalog {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            kkc: Vec<String>,
            uuc: Vec<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        ClassCatalog::new(raw.kkc, raw.uuc).map_err(serde::de::Error::custom)
    }
}
