use serde::{Deserialize, Serialize};

use crate::dataset::{labels_of, Sample, SplitDataset};
use crate::svm::{SolveStatus, SolveSummary};
use crate::{Error, Result, Scalar};

use super::{PipelineConfig, SelfTrainingParams};

/// Test error in percent and the confusion matrix (rows = true class).
pub fn evaluate<F>(
    predictions: &[usize],
    test: &[Sample<F>],
    num_classes: usize,
) -> Result<(f64, Vec<Vec<usize>>)> {
    if test.is_empty() {
        return Err(Error::invalid("cannot evaluate on an empty test set"));
    }
    if predictions.len() != test.len() {
        return Err(Error::invalid(format!(
            "{} predictions for {} test samples",
            predictions.len(),
            test.len()
        )));
    }
    let truth = labels_of(test)?;
    let mut confusion = vec![vec![0usize; num_classes]; num_classes];
    let mut wrong = 0usize;
    for (i, (&p, &t)) in predictions.iter().zip(&truth).enumerate() {
        for &l in &[p, t] {
            if l >= num_classes {
                return Err(Error::LabelOutOfRange {
                    index: i,
                    label: l,
                    num_classes,
                });
            }
        }
        confusion[t][p] += 1;
        if p != t {
            wrong += 1;
        }
    }
    Ok((100.0 * wrong as f64 / test.len() as f64, confusion))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub labeled: usize,
    pub unlabeled: usize,
    pub test: usize,
    pub num_classes: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub sigma: String,
    pub pnn_bias: Option<f64>,
    pub kernel: String,
    pub gamma: Option<f64>,
    pub c: f64,
    pub tol: f64,
    pub max_iter: Option<usize>,
}

impl ConfigEcho {
    pub fn of<F: Scalar>(config: &PipelineConfig<F>) -> Self {
        Self {
            sigma: config.sigma.describe(),
            pnn_bias: config.pnn_bias,
            kernel: config.kernel.name().to_string(),
            gamma: config.kernel.gamma().map(Scalar::as_f64),
            c: config.c.as_f64(),
            tol: config.tol.as_f64(),
            max_iter: config.max_iter,
        }
    }
}

/// Aggregate over the SVM solves of the final model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverEcho {
    pub converged: bool,
    pub max_kkt_gap: f64,
    pub total_iterations: usize,
    pub support_vectors: Vec<usize>,
}

impl SolverEcho {
    pub fn of(summaries: &[SolveSummary]) -> Self {
        Self {
            converged: summaries.iter().all(|s| s.status == SolveStatus::Converged),
            max_kkt_gap: summaries.iter().map(|s| s.kkt_gap).fold(0.0, f64::max),
            total_iterations: summaries.iter().map(|s| s.iterations).sum(),
            support_vectors: summaries.iter().map(|s| s.support_vectors).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaEcho {
    pub value: f64,
    pub grid: Vec<f64>,
    pub loo_errors: Vec<usize>,
}

/// Method-specific extras. Not part of [`ExperimentReport::same_outcome`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaEcho>,
    /// Agreement of the assigned labels with the audit ground truth of `U`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pseudo_label_accuracy_percent: Option<f64>,
    /// PNN category scores `g` for every sample of `U`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pnn_scores: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_training: Option<SelfTrainingParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_training_rounds: Option<usize>,
    /// `U` samples left unlabeled when self-training stopped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unconsumed: Option<usize>,
}

/// One trial of one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub method: String,
    pub test_error_percent: f64,
    pub counts: Counts,
    pub config: ConfigEcho,
    pub seed: u64,
    /// SHA-256 of the split's canonical bytes.
    pub split_digest: String,
    pub training_set_size: usize,
    pub confusion: Vec<Vec<usize>>,
    pub test_predictions: Vec<usize>,
    pub solver: SolverEcho,
    pub diagnostics: Diagnostics,
}

impl ExperimentReport {
    pub(crate) fn base<F: Scalar>(
        method: &str,
        split: &SplitDataset<F>,
        config: &PipelineConfig<F>,
        predictions: Vec<usize>,
        training_set_size: usize,
        summaries: &[SolveSummary],
    ) -> Result<Self> {
        let (test_error_percent, confusion) = evaluate(&predictions, split.test(), split.num_classes())?;
        Ok(Self {
            method: method.to_string(),
            test_error_percent,
            counts: Counts {
                labeled: split.labeled().len(),
                unlabeled: split.unlabeled().len(),
                test: split.test().len(),
                num_classes: split.num_classes(),
                dim: split.dim(),
            },
            config: ConfigEcho::of(config),
            seed: config.seed,
            split_digest: split.digest(),
            training_set_size,
            confusion,
            test_predictions: predictions,
            solver: SolverEcho::of(summaries),
            diagnostics: Diagnostics::default(),
        })
    }

    /// Error recomputed from the confusion matrix.
    pub fn error_from_confusion(&self) -> f64 {
        let total: usize = self.confusion.iter().flatten().sum();
        let right: usize = (0..self.confusion.len()).map(|i| self.confusion[i][i]).sum();
        100.0 * (total - right) as f64 / total as f64
    }

    /// Equal in everything except the method name and diagnostics.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let strip = |r: &Self| Self {
            method: String::new(),
            diagnostics: Diagnostics::default(),
            ..r.clone()
        };
        strip(self) == strip(other)
    }

    /// Pretty JSON document.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ModelFormat(format!("report: {e}")))
    }

    pub fn csv_header() -> &'static str {
        "method,seed,error_percent,labeled,unlabeled,test,classes,dim,sigma,pnn_bias,kernel,gamma,c,training_size,converged,split_digest"
    }

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        let sigma = self
            .diagnostics
            .sigma
            .as_ref()
            .map_or_else(String::new, |s| s.value.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.method,
            self.seed,
            self.test_error_percent,
            self.counts.labeled,
            self.counts.unlabeled,
            self.counts.test,
            self.counts.num_classes,
            self.counts.dim,
            sigma,
            opt(self.config.pnn_bias),
            self.config.kernel,
            opt(self.config.gamma),
            self.config.c,
            self.training_set_size,
            self.solver.converged,
            self.split_digest
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(labels: &[usize]) -> Vec<Sample<f64>> {
        labels.iter().map(|&l| Sample::labeled(vec![0.0], l)).collect()
    }

    #[test]
    fn all_right_all_wrong() {
        let t = labeled(&[0, 1, 1, 0]);
        assert_eq!(evaluate(&[0, 1, 1, 0], &t, 2).unwrap().0, 0.0);
        let (e, m) = evaluate(&[1, 0, 0, 1], &t, 2).unwrap();
        assert_eq!(e, 100.0);
        assert_eq!(m, vec![vec![0, 2], vec![2, 0]]);
    }

    #[test]
    fn usps_sized_error() {
        let truth: Vec<usize> = (0..2007).map(|i| i % 10).collect();
        let t = labeled(&truth);
        let mut pred = truth.clone();
        for p in pred.iter_mut().take(149) {
            *p = (*p + 1) % 10;
        }
        let (e, m) = evaluate(&pred, &t, 10).unwrap();
        assert!((e - 100.0 * 149.0 / 2007.0).abs() < 1e-12);
        assert_eq!(format!("{e:.2}"), "7.42");
        assert_eq!(m.iter().flatten().sum::<usize>(), 2007);
    }

    #[test]
    fn evaluate_errors() {
        let t = labeled(&[0, 1]);
        assert!(evaluate(&[0], &t, 2).is_err());
        assert!(evaluate::<f64>(&[], &[], 2).is_err());
        assert!(evaluate(&[0, 2], &t, 2).is_err());
    }
}
