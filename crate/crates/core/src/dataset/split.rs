use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{common_dim, labels_of, Sample};
use crate::{Error, Result, Scalar};

/// How many training samples keep their labels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LabeledAmount {
    /// Exactly this many per class.
    PerClass(usize),
    /// This fraction of the training set, stratified by class.
    Fraction(f64),
}

/// Labeled pool `L`, unlabeled pool `U` and held-out test set.
///
/// The ground-truth labels of `U` are kept apart from the pool itself:
/// [`SplitDataset::unlabeled`] hands out samples with `label == None`, and the
/// true classes are reachable only through [`SplitDataset::unlabeled_ground_truth`],
/// which is for audit diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitDataset<F> {
    labeled: Vec<Sample<F>>,
    unlabeled: Vec<Sample<F>>,
    unlabeled_truth: Vec<usize>,
    test: Vec<Sample<F>>,
    labeled_index: Vec<usize>,
    unlabeled_index: Vec<usize>,
    num_classes: usize,
    dim: usize,
}

impl<F: Scalar> SplitDataset<F> {
    /// Builds a split from explicit pools. `unlabeled` must carry its true
    /// labels; they are moved to the audit side and stripped from the pool.
    /// Source indices are assigned `L` first, then `U`.
    pub fn from_parts(
        labeled: Vec<Sample<F>>,
        unlabeled: Vec<Sample<F>>,
        test: Vec<Sample<F>>,
    ) -> Result<Self> {
        let nl = labeled.len();
        let nu = unlabeled.len();
        Self::assemble(labeled, unlabeled, test, (0..nl).collect(), (nl..nl + nu).collect())
    }

    fn assemble(
        labeled: Vec<Sample<F>>,
        unlabeled: Vec<Sample<F>>,
        test: Vec<Sample<F>>,
        labeled_index: Vec<usize>,
        unlabeled_index: Vec<usize>,
    ) -> Result<Self> {
        if labeled.is_empty() {
            return Err(Error::invalid("labeled pool is empty"));
        }
        if test.is_empty() {
            return Err(Error::invalid("test set is empty"));
        }
        let dim = common_dim(&labeled)?;
        for part in [&unlabeled, &test] {
            if !part.is_empty() {
                let d = common_dim(part)?;
                if d != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: d,
                        index: None,
                    });
                }
            }
        }
        let l_labels = labels_of(&labeled)?;
        let unlabeled_truth = labels_of(&unlabeled)?;
        let t_labels = labels_of(&test)?;
        let num_classes = l_labels
            .iter()
            .chain(&unlabeled_truth)
            .chain(&t_labels)
            .max()
            .map_or(0, |m| m + 1)
            .max(2);
        let mut seen = vec![false; num_classes];
        for &c in &l_labels {
            seen[c] = true;
        }
        if let Some(class) = seen.iter().position(|s| !s) {
            return Err(Error::EmptyClass { class });
        }
        let unlabeled = unlabeled
            .into_iter()
            .map(|s| Sample::unlabeled(s.features))
            .collect();
        Ok(Self {
            labeled,
            unlabeled,
            unlabeled_truth,
            test,
            labeled_index,
            unlabeled_index,
            num_classes,
            dim,
        })
    }

    pub fn labeled(&self) -> &[Sample<F>] {
        &self.labeled
    }

    /// Unlabeled pool; every sample has `label == None`.
    pub fn unlabeled(&self) -> &[Sample<F>] {
        &self.unlabeled
    }

    pub fn test(&self) -> &[Sample<F>] {
        &self.test
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Positions of `L` in the list the split was drawn from.
    pub fn labeled_indices(&self) -> &[usize] {
        &self.labeled_index
    }

    /// Positions of `U` in the list the split was drawn from.
    pub fn unlabeled_indices(&self) -> &[usize] {
        &self.unlabeled_index
    }

    /// True classes of `U`. Reporting only; no training path reads this.
    pub fn unlabeled_ground_truth(&self) -> &[usize] {
        &self.unlabeled_truth
    }

    /// Replaces the audit labels of `U`, leaving every training input intact.
    pub fn with_ground_truth(mut self, truth: Vec<usize>) -> Result<Self> {
        if truth.len() != self.unlabeled.len() {
            return Err(Error::invalid("ground truth length differs from unlabeled pool"));
        }
        self.unlabeled_truth = truth;
        Ok(self)
    }

    /// Canonical byte encoding of the three pools (features as IEEE bits,
    /// labels, source indices). Identical splits give identical bytes.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut put = |v: u64| out.extend_from_slice(&v.to_le_bytes());
        put(self.num_classes as u64);
        put(self.dim as u64);
        for (tag, pool) in [(0u64, &self.labeled), (1, &self.unlabeled), (2, &self.test)] {
            put(tag);
            put(pool.len() as u64);
            for s in pool {
                put(s.label.map_or(u64::MAX, |l| l as u64));
                for v in &s.features {
                    put(v.as_f64().to_bits());
                }
            }
        }
        for &i in self.labeled_index.iter().chain(&self.unlabeled_index) {
            put(i as u64);
        }
        for &c in &self.unlabeled_truth {
            put(c as u64);
        }
        out
    }

    /// Hex SHA-256 of [`canonical_bytes`](Self::canonical_bytes).
    pub fn digest(&self) -> String {
        Sha256::digest(self.canonical_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Splits `train` into labeled and unlabeled pools; `test` is held out as is.
///
/// Selection is stratified by class: each class's indices are shuffled with a
/// ChaCha8 stream seeded by `seed` (classes in ascending order) and the first
/// `m_c` are kept labeled. Both pools are returned in source order.
pub fn split_semi_supervised<F: Scalar>(
    train: Vec<Sample<F>>,
    test: Vec<Sample<F>>,
    amount: LabeledAmount,
    seed: u64,
) -> Result<SplitDataset<F>> {
    if train.is_empty() {
        return Err(Error::invalid("training set is empty"));
    }
    common_dim(&train)?;
    let labels = labels_of(&train)?;
    let num_classes = labels.iter().max().map_or(0, |m| m + 1).max(2);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
    for (i, &c) in labels.iter().enumerate() {
        by_class[c].push(i);
    }
    if let Some(class) = by_class.iter().position(|v| v.is_empty()) {
        return Err(Error::EmptyClass { class });
    }
    let sizes: Vec<usize> = by_class.iter().map(Vec::len).collect();
    let wanted = labeled_counts(&sizes, amount)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut is_labeled = vec![false; train.len()];
    for (members, &m) in by_class.iter_mut().zip(&wanted) {
        members.shuffle(&mut rng);
        for &i in &members[..m] {
            is_labeled[i] = true;
        }
    }

    let mut labeled = Vec::new();
    let mut unlabeled = Vec::new();
    let mut labeled_index = Vec::new();
    let mut unlabeled_index = Vec::new();
    for (i, s) in train.into_iter().enumerate() {
        if is_labeled[i] {
            labeled.push(s);
            labeled_index.push(i);
        } else {
            unlabeled.push(s);
            unlabeled_index.push(i);
        }
    }
    SplitDataset::assemble(labeled, unlabeled, test, labeled_index, unlabeled_index)
}

/// Per-class labeled counts for the requested amount.
fn labeled_counts(sizes: &[usize], amount: LabeledAmount) -> Result<Vec<usize>> {
    match amount {
        LabeledAmount::PerClass(m) => {
            if m == 0 {
                return Err(Error::invalid("labeled_per_class must be at least 1"));
            }
            if let Some((class, &available)) = sizes.iter().enumerate().find(|(_, &n)| n < m) {
                return Err(Error::InsufficientSamples {
                    class,
                    requested: m,
                    available,
                });
            }
            Ok(vec![m; sizes.len()])
        }
        LabeledAmount::Fraction(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::invalid(format!("labeled fraction must be in (0, 1], got {f}")));
            }
            let total: usize = sizes.iter().sum();
            let target = (f * total as f64).round() as usize;
            let mut counts: Vec<usize> = sizes
                .iter()
                .map(|&n| ((f * n as f64).floor() as usize).max(1))
                .collect();
            // remainders go to the largest classes first, lowest id on ties
            let mut order: Vec<usize> = (0..sizes.len()).collect();
            order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
            let mut assigned: usize = counts.iter().sum();
            while assigned < target {
                let mut progressed = false;
                for &c in &order {
                    if assigned == target {
                        break;
                    }
                    if counts[c] < sizes[c] {
                        counts[c] += 1;
                        assigned += 1;
                        progressed = true;
                    }
                }
                if !progressed {
                    break;
                }
            }
            Ok(counts)
        }
    }
}
