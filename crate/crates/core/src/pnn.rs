//! Parzen probabilistic neural network.
//!
//! Training stores every labeled pattern, scaled to unit length, as the
//! weight vector of one pattern unit. Classification normalizes the query,
//! lets each pattern unit emit `exp((z - 1) / sigma^2)` with `z = w . x`, sums
//! the emissions per category and takes the argmax. For unit vectors
//! `exp((z - 1) / sigma^2) = exp(-|x - w|^2 / (2 sigma^2))`, so each category
//! score is a Parzen estimate with an isotropic Gaussian window.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Sample;
use crate::scalar::dot;
use crate::{Error, Result, Scalar};

pub const DEFAULT_SIGMA: f64 = 1.0;
/// Grid searched by [`select_sigma_loo`] in the experiments.
pub const SIGMA_GRID: [f64; 4] = [0.3, 0.5, 1.0, 2.0];
const ZERO_NORM: f64 = 1e-12;

/// Scales `v` to unit Euclidean length.
pub fn normalize<F: Scalar>(v: &[F]) -> Result<Vec<F>> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index: None });
    }
    let scale = v.iter().fold(F::zero(), |m, x| m.max(x.abs()));
    if scale == F::zero() {
        return Err(Error::ZeroVector { index: None });
    }
    let norm = scale * v.iter().map(|&x| (x / scale) * (x / scale)).sum::<F>().sqrt();
    if norm < F::lit(ZERO_NORM) {
        return Err(Error::ZeroVector { index: None });
    }
    Ok(v.iter().map(|&x| x / norm).collect())
}

/// Appends a constant coordinate, so that normalization keeps the radial
/// position of low-dimensional inputs instead of collapsing it.
pub fn append_bias<F: Scalar>(v: &[F], bias: F) -> Vec<F> {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.extend_from_slice(v);
    out.push(bias);
    out
}

/// Trained network: one unit-norm pattern per training sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PnnModel<F> {
    weights: Vec<F>,
    categories: Vec<usize>,
    dim: usize,
    sigma: F,
    num_classes: usize,
}

/// Per-category discriminants `g` and the winning class.
#[derive(Clone, Debug, PartialEq)]
pub struct CategoryScores<F> {
    pub g: Vec<F>,
    /// `ln g`, evaluated stably; `-inf` for a category without patterns.
    pub log_g: Vec<F>,
    /// Argmax of `g`, lowest class id on ties. When every `g` underflows to
    /// zero the argmax of `log_g` decides.
    pub predicted: usize,
}

impl<F: Scalar> PnnModel<F> {
    /// Single pass over `labeled`: pattern `j` stores `normalize(x_j)` and is
    /// connected to category `label_j`.
    pub fn train(labeled: &[Sample<F>], sigma: F, num_classes: usize) -> Result<Self> {
        if labeled.is_empty() {
            return Err(Error::invalid("PNN needs at least one pattern"));
        }
        check_sigma(sigma)?;
        if num_classes < 2 {
            return Err(Error::invalid("PNN needs at least two classes"));
        }
        let dim = labeled[0].dim();
        let mut weights = Vec::with_capacity(labeled.len() * dim);
        let mut categories = Vec::with_capacity(labeled.len());
        for (j, s) in labeled.iter().enumerate() {
            let label = s.label.ok_or(Error::MissingLabel { index: j })?;
            if label >= num_classes {
                return Err(Error::LabelOutOfRange {
                    index: j,
                    label,
                    num_classes,
                });
            }
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                    index: Some(j),
                });
            }
            weights.extend(normalize(&s.features).map_err(|e| e.at(j))?);
            categories.push(label);
        }
        Ok(Self {
            weights,
            categories,
            dim,
            sigma,
            num_classes,
        })
    }

    pub fn num_patterns(&self) -> usize {
        self.categories.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma(&self) -> F {
        self.sigma
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn categories(&self) -> &[usize] {
        &self.categories
    }

    pub fn pattern(&self, j: usize) -> &[F] {
        &self.weights[j * self.dim..(j + 1) * self.dim]
    }

    pub fn patterns(&self) -> impl Iterator<Item = &[F]> {
        self.weights.chunks_exact(self.dim)
    }

    /// Same model with a different window width.
    pub fn with_sigma(mut self, sigma: F) -> Result<Self> {
        check_sigma(sigma)?;
        self.sigma = sigma;
        Ok(self)
    }

    pub fn classify(&self, x: &[F]) -> Result<CategoryScores<F>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
                index: None,
            });
        }
        let xn = normalize(x)?;
        let z: Vec<F> = self.patterns().map(|w| dot(w, &xn)).collect();
        Ok(scores_from_activations(
            z.iter().copied().zip(self.categories.iter().copied()),
            self.sigma,
            self.num_classes,
        ))
    }

    /// Element-wise [`classify`](Self::classify); errors carry the element
    /// index. Order-preserving regardless of thread scheduling.
    pub fn classify_batch<X>(&self, xs: &[X]) -> Vec<Result<CategoryScores<F>>>
    where
        X: AsRef<[F]> + Sync,
    {
        xs.par_iter()
            .enumerate()
            .map(|(i, x)| self.classify(x.as_ref()).map_err(|e| e.at(i)))
            .collect()
    }
}

fn check_sigma<F: Scalar>(sigma: F) -> Result<()> {
    if sigma > F::zero() && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("sigma must be positive, got {sigma}")))
    }
}

/// Sums pattern emissions per category. Summation follows pattern order.
fn scores_from_activations<F: Scalar>(
    activations: impl Iterator<Item = (F, usize)> + Clone,
    sigma: F,
    num_classes: usize,
) -> CategoryScores<F> {
    let inv = (sigma * sigma).recip();
    let mut g = vec![F::zero(); num_classes];
    let mut peak = vec![F::neg_infinity(); num_classes];
    for (z, c) in activations.clone() {
        g[c] = g[c] + ((z - F::one()) * inv).exp();
        peak[c] = peak[c].max(z);
    }
    // log-sum-exp shifted by each category's best activation
    let mut shifted = vec![F::zero(); num_classes];
    for (z, c) in activations {
        shifted[c] = shifted[c] + ((z - peak[c]) * inv).exp();
    }
    let log_g: Vec<F> = (0..num_classes)
        .map(|c| {
            if peak[c] == F::neg_infinity() {
                F::neg_infinity()
            } else {
                (peak[c] - F::one()) * inv + shifted[c].ln()
            }
        })
        .collect();
    let predicted = if g.iter().any(|&v| v > F::zero()) {
        argmax(&g)
    } else {
        argmax(&log_g)
    };
    CategoryScores { g, log_g, predicted }
}

/// Index of the first maximum.
pub(crate) fn argmax<F: PartialOrd + Copy>(v: &[F]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate().skip(1) {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Outcome of leave-one-out window selection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaSelection {
    pub sigma: f64,
    pub grid: Vec<f64>,
    /// Leave-one-out misclassifications on the labeled set, one per grid entry.
    pub loo_errors: Vec<usize>,
}

/// Picks the grid value with the fewest leave-one-out errors of a PNN trained
/// on `labeled` (each pattern classified by all the others). Ties go to the
/// earliest grid entry.
pub fn select_sigma_loo<F: Scalar>(
    labeled: &[Sample<F>],
    grid: &[f64],
    num_classes: usize,
) -> Result<SigmaSelection> {
    if grid.is_empty() {
        return Err(Error::invalid("sigma grid is empty"));
    }
    if labeled.len() < 2 {
        return Err(Error::invalid("leave-one-out needs at least two labeled samples"));
    }
    for &s in grid {
        check_sigma(s)?;
    }
    let model = PnnModel::train(labeled, F::one(), num_classes)?;
    let n = model.num_patterns();
    let rows: Vec<Vec<F>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let wi = model.pattern(i);
            (0..n).map(|j| dot(model.pattern(j), wi)).collect()
        })
        .collect();

    let loo_errors: Vec<usize> = grid
        .iter()
        .map(|&sigma| {
            let sigma = F::lit(sigma);
            rows.par_iter()
                .enumerate()
                .filter(|(i, row)| {
                    let acts = row
                        .iter()
                        .copied()
                        .zip(model.categories().iter().copied())
                        .enumerate()
                        .filter(move |(j, _)| j != i)
                        .map(|(_, a)| a);
                    scores_from_activations(acts, sigma, num_classes).predicted
                        != model.categories()[*i]
                })
                .count()
        })
        .collect();
    let best = argmin(&loo_errors);
    Ok(SigmaSelection {
        sigma: grid[best],
        grid: grid.to_vec(),
        loo_errors,
    })
}

fn argmin(v: &[usize]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate().skip(1) {
        if *x < v[best] {
            best = i;
        }
    }
    best
}
