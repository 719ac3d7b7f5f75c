//! Samples and the datasets the experiments run on.

mod files;
mod moons;
mod split;

pub use files::{load_usps, locate_usps, read_samples, UspsOptions, USPS_DIM, USPS_TEST_SIZE, USPS_TRAIN_SIZE};
pub use moons::{generate_two_moons, two_moons_test_seed, two_moons_trial, DEFAULT_NOISE_STD};
pub use split::{split_semi_supervised, LabeledAmount, SplitDataset};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// A feature vector with an optional class id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample<F> {
    pub features: Vec<F>,
    pub label: Option<usize>,
}

impl<F: Scalar> Sample<F> {
    pub fn labeled(features: Vec<F>, label: usize) -> Self {
        Self {
            features,
            label: Some(label),
        }
    }

    pub fn unlabeled(features: Vec<F>) -> Self {
        Self {
            features,
            label: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }

    /// Checks the per-sample invariants: non-empty and finite.
    pub fn validate(&self) -> Result<()> {
        if self.features.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
                index: None,
            });
        }
        if self.features.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: None });
        }
        Ok(())
    }
}

/// Validates a list of samples and returns their common dimension.
pub fn common_dim<F: Scalar>(samples: &[Sample<F>]) -> Result<usize> {
    let first = samples
        .first()
        .ok_or_else(|| Error::invalid("empty sample list"))?;
    let dim = first.dim();
    for (i, s) in samples.iter().enumerate() {
        s.validate().map_err(|e| e.at(i))?;
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
                index: Some(i),
            });
        }
    }
    Ok(dim)
}

/// Labels of a fully labeled list, in order.
pub fn labels_of<F>(samples: &[Sample<F>]) -> Result<Vec<usize>> {
    samples
        .iter()
        .enumerate()
        .map(|(i, s)| s.label.ok_or(Error::MissingLabel { index: i }))
        .collect()
}

pub(crate) fn feature_refs<F>(samples: &[Sample<F>]) -> Vec<&[F]> {
    samples.iter().map(|s| s.features.as_slice()).collect()
}
