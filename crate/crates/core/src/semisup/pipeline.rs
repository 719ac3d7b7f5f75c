use std::cmp::Ordering;

use crate::dataset::{feature_refs, labels_of, Sample, SplitDataset};
use crate::pnn::{append_bias, select_sigma_loo, PnnModel};
use crate::svm::SolveSummary;
use crate::{Error, Result, Scalar};

use super::report::{Diagnostics, ExperimentReport, SigmaEcho};
use super::{PipelineConfig, SelfTrainingParams, SigmaChoice, SvmClassifier};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    PnnTraining,
    SelfTraining,
    Supervised,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::PnnTraining, Method::SelfTraining, Method::Supervised];

    pub fn name(self) -> &'static str {
        match self {
            Method::PnnTraining => "pnn-training",
            Method::SelfTraining => "self-training",
            Method::Supervised => "supervised",
        }
    }

    /// Runs this method; self-training uses `self_training` for its schedule.
    pub fn run<F: Scalar>(
        self,
        split: &SplitDataset<F>,
        config: &PipelineConfig<F>,
        self_training: SelfTrainingParams,
    ) -> Result<PipelineRun<F>> {
        match self {
            Method::PnnTraining => pnn_training_pipeline(split, config),
            Method::SelfTraining => self_training_pipeline(split, config, self_training),
            Method::Supervised => supervised_svm_baseline(split, config),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown method {s:?}")))
    }
}

/// A finished pipeline: its report plus the artefacts behind it.
#[derive(Clone, Debug)]
pub struct PipelineRun<F> {
    pub report: ExperimentReport,
    pub classifier: SvmClassifier<F>,
    /// Label each `U` sample entered the training set with, if it did.
    pub pseudo_labels: Vec<Option<usize>>,
}

/// Training set under construction: `L` first, then pseudo-labeled samples in
/// the order they were added.
struct TrainingSet<'a, F> {
    features: Vec<&'a [F]>,
    labels: Vec<usize>,
}

impl<'a, F: Scalar> TrainingSet<'a, F> {
    fn from_labeled(labeled: &'a [Sample<F>]) -> Result<Self> {
        Ok(Self {
            features: feature_refs(labeled),
            labels: labels_of(labeled)?,
        })
    }

    fn push(&mut self, x: &'a [F], label: usize) {
        self.features.push(x);
        self.labels.push(label);
    }

    fn fit(&self, num_classes: usize, config: &PipelineConfig<F>) -> Result<(SvmClassifier<F>, Vec<SolveSummary>)> {
        SvmClassifier::train(&self.features, &self.labels, num_classes, config)
    }
}

fn predict_test<F: Scalar>(classifier: &SvmClassifier<F>, test: &[Sample<F>]) -> Result<Vec<usize>> {
    test.iter()
        .enumerate()
        .map(|(i, s)| classifier.predict(&s.features).map_err(|e| e.at(i)))
        .collect()
}

/// Percentage of assigned labels agreeing with the audit ground truth.
fn audit_accuracy<F: Scalar>(split: &SplitDataset<F>, assigned: &[Option<usize>]) -> Option<f64> {
    let truth = split.unlabeled_ground_truth();
    let (mut n, mut right) = (0usize, 0usize);
    for (a, t) in assigned.iter().zip(truth) {
        if let Some(a) = a {
            n += 1;
            right += usize::from(a == t);
        }
    }
    (n > 0).then(|| 100.0 * right as f64 / n as f64)
}

fn pnn_input<F: Scalar>(x: &[F], bias: Option<f64>) -> Vec<F> {
    match bias {
        Some(b) => append_bias(x, F::lit(b)),
        None => x.to_vec(),
    }
}

/// PNN-Training: train the PNN on `L`, label all of `U` with it in one pass,
/// train the SVM on `L` plus the pseudo-labeled `U`, score on the test set.
pub fn pnn_training_pipeline<F: Scalar>(
    split: &SplitDataset<F>,
    config: &PipelineConfig<F>,
) -> Result<PipelineRun<F>> {
    config.validate()?;
    let k = split.num_classes();
    let pnn_labeled: Vec<Sample<F>> = split
        .labeled()
        .iter()
        .map(|s| Sample {
            features: pnn_input(&s.features, config.pnn_bias),
            label: s.label,
        })
        .collect();

    let sigma = match &config.sigma {
        SigmaChoice::Fixed(s) => SigmaEcho {
            value: *s,
            grid: vec![*s],
            loo_errors: Vec::new(),
        },
        SigmaChoice::LeaveOneOut(grid) if pnn_labeled.len() >= 2 => {
            let sel = select_sigma_loo(&pnn_labeled, grid, k)?;
            SigmaEcho {
                value: sel.sigma,
                grid: sel.grid,
                loo_errors: sel.loo_errors,
            }
        }
        SigmaChoice::LeaveOneOut(grid) => SigmaEcho {
            value: grid[0],
            grid: grid.clone(),
            loo_errors: Vec::new(),
        },
    };
    let pnn = PnnModel::train(&pnn_labeled, F::lit(sigma.value), k)?;

    let queries: Vec<Vec<F>> = split
        .unlabeled()
        .iter()
        .map(|s| pnn_input(&s.features, config.pnn_bias))
        .collect();
    let scores = pnn
        .classify_batch(&queries)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut train = TrainingSet::from_labeled(split.labeled())?;
    for (s, sc) in split.unlabeled().iter().zip(&scores) {
        train.push(&s.features, sc.predicted);
    }
    let (classifier, summaries) = train.fit(k, config)?;
    let predictions = predict_test(&classifier, split.test())?;

    let pseudo_labels: Vec<Option<usize>> = scores.iter().map(|s| Some(s.predicted)).collect();
    let mut report = ExperimentReport::base(
        Method::PnnTraining.name(),
        split,
        config,
        predictions,
        train.labels.len(),
        &summaries,
    )?;
    report.diagnostics = Diagnostics {
        sigma: Some(sigma),
        pseudo_label_accuracy_percent: audit_accuracy(split, &pseudo_labels),
        pnn_scores: Some(
            scores
                .iter()
                .map(|s| s.g.iter().map(|v| v.as_f64()).collect())
                .collect(),
        ),
        ..Diagnostics::default()
    };
    Ok(PipelineRun {
        report,
        classifier,
        pseudo_labels,
    })
}

/// Self-training: repeatedly train the SVM, move the most confident
/// `confidence_quantile` of the remaining pool (at least one sample) into the
/// training set with predicted labels, until the pool is empty or
/// `max_rounds` rounds have run. Confidence ties keep pool order.
pub fn self_training_pipeline<F: Scalar>(
    split: &SplitDataset<F>,
    config: &PipelineConfig<F>,
    params: SelfTrainingParams,
) -> Result<PipelineRun<F>> {
    config.validate()?;
    params.validate()?;
    let k = split.num_classes();
    let pool = split.unlabeled();
    let mut train = TrainingSet::from_labeled(split.labeled())?;
    let mut remaining: Vec<usize> = (0..pool.len()).collect();
    let mut assigned = vec![None; pool.len()];
    let mut rounds = 0;

    while !remaining.is_empty() && rounds < params.max_rounds {
        let (classifier, _) = train.fit(k, config)?;
        let mut scored = remaining
            .iter()
            .map(|&u| {
                let (label, conf) = classifier.predict_with_confidence(&pool[u].features)?;
                Ok((u, label, conf))
            })
            .collect::<Result<Vec<(usize, usize, F)>>>()?;
        scored.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0)));
        let take = ((params.confidence_quantile * remaining.len() as f64).floor() as usize)
            .clamp(1, remaining.len());
        for &(u, label, _) in &scored[..take] {
            train.push(&pool[u].features, label);
            assigned[u] = Some(label);
        }
        remaining.retain(|u| assigned[*u].is_none());
        rounds += 1;
    }

    let (classifier, summaries) = train.fit(k, config)?;
    let predictions = predict_test(&classifier, split.test())?;
    let mut report = ExperimentReport::base(
        Method::SelfTraining.name(),
        split,
        config,
        predictions,
        train.labels.len(),
        &summaries,
    )?;
    report.diagnostics = Diagnostics {
        pseudo_label_accuracy_percent: audit_accuracy(split, &assigned),
        self_training: Some(params),
        self_training_rounds: Some(rounds),
        unconsumed: Some(remaining.len()),
        ..Diagnostics::default()
    };
    Ok(PipelineRun {
        report,
        classifier,
        pseudo_labels: assigned,
    })
}

/// SVM on `L` only.
pub fn supervised_svm_baseline<F: Scalar>(
    split: &SplitDataset<F>,
    config: &PipelineConfig<F>,
) -> Result<PipelineRun<F>> {
    config.validate()?;
    let train = TrainingSet::from_labeled(split.labeled())?;
    let (classifier, summaries) = train.fit(split.num_classes(), config)?;
    let predictions = predict_test(&classifier, split.test())?;
    let report = ExperimentReport::base(
        Method::Supervised.name(),
        split,
        config,
        predictions,
        train.labels.len(),
        &summaries,
    )?;
    Ok(PipelineRun {
        report,
        classifier,
        pseudo_labels: vec![None; split.unlabeled().len()],
    })
}
