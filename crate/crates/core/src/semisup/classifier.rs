use crate::pnn::argmax;
use crate::svm::{label_of_value, train_one_vs_all, BinaryLabel, MulticlassModel, SolveSummary, SvmBinaryModel};
use crate::{Result, Scalar};

use super::PipelineConfig;

/// The discriminative stage: a single binary SVM for two classes, one-vs-all
/// otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum SvmClassifier<F> {
    Binary(SvmBinaryModel<F>),
    OneVsAll(MulticlassModel<F>),
}

impl<F: Scalar> SvmClassifier<F> {
    pub fn train(
        x: &[&[F]],
        labels: &[usize],
        num_classes: usize,
        config: &PipelineConfig<F>,
    ) -> Result<(Self, Vec<SolveSummary>)> {
        let params = config.solver_params();
        if num_classes == 2 {
            let y: Vec<BinaryLabel> = labels.iter().map(|&l| BinaryLabel::from_class(l)).collect();
            let (m, s) = SvmBinaryModel::train(x, &y, &config.kernel, &params)?;
            Ok((SvmClassifier::Binary(m), vec![s]))
        } else {
            let (m, s) = train_one_vs_all(x, labels, num_classes, &config.kernel, &params)?;
            Ok((SvmClassifier::OneVsAll(m), s))
        }
    }

    pub fn predict(&self, x: &[F]) -> Result<usize> {
        match self {
            SvmClassifier::Binary(m) => Ok(m.predict(x)?.to_class()),
            SvmClassifier::OneVsAll(m) => m.predict(x),
        }
    }

    /// Predicted class and its confidence: `|f(x)|` for the binary model, the
    /// winning class-vs-rest value otherwise.
    pub fn predict_with_confidence(&self, x: &[F]) -> Result<(usize, F)> {
        match self {
            SvmClassifier::Binary(m) => {
                let v = m.decision_value(x)?;
                Ok((label_of_value(v).to_class(), v.abs()))
            }
            SvmClassifier::OneVsAll(m) => {
                let values = m.decision_values(x)?;
                let best = argmax(&values);
                Ok((best, values[best]))
            }
        }
    }

    /// `f(x)` of the binary model; the winning class-vs-rest value otherwise.
    pub fn decision_value(&self, x: &[F]) -> Result<F> {
        match self {
            SvmClassifier::Binary(m) => m.decision_value(x),
            SvmClassifier::OneVsAll(_) => Ok(self.predict_with_confidence(x)?.1),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            SvmClassifier::Binary(m) => m.to_text(),
            SvmClassifier::OneVsAll(m) => m.to_text(),
        }
    }
}
