//! Count matrices and construction of the general confusion matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{TrueClass, ValidatedRecords};

/// A square matrix of non-negative integer counts, row = true class,
/// column = predicted class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountMatrix {
    n: usize,
    counts: Vec<u64>,
}

impl CountMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            counts: vec![0; n * n],
        }
    }

    /// Builds from explicit rows; all rows must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        let mut counts = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidShape(format!(
                    "expected {n} columns, found a row with {}",
                    row.len()
                )));
            }
            counts.extend_from_slice(row);
        }
        Ok(Self { n, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.n + col]
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, amount: u64) {
        self.counts[row * self.n + col] += amount;
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.counts[row * self.n..(row + 1) * self.n]
    }

    pub fn row_sum(&self, row: usize) -> u64 {
        self.row(row).iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Cell-wise sum; both matrices must have the same dimension.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidShape(format!(
                "cannot add a {}x{} matrix to a {}x{} one",
                other.n, other.n, self.n, self.n
            )));
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { n: self.n, counts })
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.counts.chunks_exact(self.n)
    }
}

/// Binary confusion matrix for the known-vs-unknown dichotomy; known
/// classes are the positives, unknown-unknown classes the negatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryConfusionMatrix {
    /// Known-class records accepted as known.
    pub true_positives: u64,
    /// Known-class records rejected as unknown (false unknowns).
    pub false_negatives: u64,
    /// Unknown-class records accepted as known (false knowns).
    pub false_positives: u64,
    /// Unknown-class records rejected as unknown.
    pub true_negatives: u64,
}

impl BinaryConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.true_positives + self.false_negatives + self.false_positives + self.true_negatives
    }

    /// View as a 2x2 count matrix `[[tp, fn], [fp, tn]]`, rows = truth.
    pub fn as_count_matrix(&self) -> CountMatrix {
        CountMatrix::from_rows(&[
            vec![self.true_positives, self.false_negatives],
            vec![self.false_positives, self.true_negatives],
        ])
        .expect("2x2 shape is static")
    }
}

/// The (K+1) x (K+1) general confusion matrix: one row/column per known
/// class plus a final aggregated row (true unknown-unknown) and column
/// (predicted unknown).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralConfusionMatrix {
    kkc_labels: Vec<String>,
    matrix: CountMatrix,
}

impl GeneralConfusionMatrix {
    /// Builds from explicit rows (tests and fixtures); dimension must be
    /// `kkc_labels.len() + 1`.
    pub fn from_rows(kkc_labels: Vec<String>, rows: &[Vec<u64>]) -> Result<Self> {
        let matrix = CountMatrix::from_rows(rows)?;
        if matrix.n() != kkc_labels.len() + 1 {
            return Err(Error::InvalidShape(format!(
                "{} known labels need a {} x {} matrix, got {} x {}",
                kkc_labels.len(),
                kkc_labels.len() + 1,
                kkc_labels.len() + 1,
                matrix.n(),
                matrix.n()
            )));
        }
        Ok(Self { kkc_labels, matrix })
    }

    pub fn k(&self) -> usize {
        self.kkc_labels.len()
    }

    /// Index of the aggregated unknown row/column.
    pub fn unknown_index(&self) -> usize {
        self.k()
    }

    pub fn kkc_labels(&self) -> &[String] {
        &self.kkc_labels
    }

    pub fn counts(&self) -> &CountMatrix {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.matrix.get(row, col)
    }

    pub fn total(&self) -> u64 {
        self.matrix.total()
    }

    /// Sum of the known-row, known-column block.
    pub fn kkc_block_total(&self) -> u64 {
        let k = self.k();
        (0..k).map(|i| (0..k).map(|j| self.get(i, j)).sum::<u64>()).sum()
    }

    /// Known-class records rejected as unknown.
    pub fn false_unknown_count(&self) -> u64 {
        let k = self.k();
        (0..k).map(|i| self.get(i, k)).sum()
    }

    /// Unknown-class records predicted as some known class.
    pub fn false_known_count(&self) -> u64 {
        let k = self.k();
        (0..k).map(|j| self.get(k, j)).sum()
    }
}

fn accumulate(records: &[crate::record::ResolvedRecord], k: usize) -> CountMatrix {
    let mut matrix = CountMatrix::zeros(k + 1);
    for record in records {
        let row = match record.true_class {
            TrueClass::Known(i) => i,
            TrueClass::Unknown(_) => k,
        };
        let col = record.open.unwrap_or(k);
        matrix.add(row, col, 1);
    }
    matrix
}

/// Sequential reference construction of the general confusion matrix.
pub fn build_general_matrix_sequential(records: &ValidatedRecords) -> GeneralConfusionMatrix {
    let k = records.catalog().k();
    GeneralConfusionMatrix {
        kkc_labels: records.catalog().kkc_labels().to_vec(),
        matrix: accumulate(&records.entries, k),
    }
}

/// Builds the general confusion matrix: cell `(i, j)` counts records of
/// true class `i` predicted as `j`, with index K aggregating all
/// unknown-unknown true classes (rows) and rejection (column).
///
/// With the `parallel` feature the records are folded in chunks; integer
/// addition makes the result identical to
/// [`build_general_matrix_sequential`] regardless of chunking.
#[cfg(feature = "parallel")]
pub fn build_general_matrix(records: &ValidatedRecords) -> GeneralConfusionMatrix {
    use rayon::prelude::*;

    const CHUNK: usize = 8192;
    let k = records.catalog().k();
    let matrix = records
        .entries
        .par_chunks(CHUNK)
        .map(|chunk| accumulate(chunk, k))
        .reduce(
            || CountMatrix::zeros(k + 1),
            |a, b| a.checked_add(&b).expect("chunk matrices share dimensions"),
        );
    GeneralConfusionMatrix {
        kkc_labels: records.catalog().kkc_labels().to_vec(),
        matrix,
    }
}

/// Builds the general confusion matrix (sequential build of the crate).
#[cfg(not(feature = "parallel"))]
pub fn build_general_matrix(records: &ValidatedRecords) -> GeneralConfusionMatrix {
    build_general_matrix_sequential(records)
}
