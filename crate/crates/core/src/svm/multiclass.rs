use rayon::prelude::*;
use super::smo::{SolveSummary, SolverParams};
use super::{BinaryLabel, KernelSpec, SvmBinaryModel};
use crate::pnn::argmax;
use crate::{Error, Result, Scalar};

const OVA_MAGIC: &str = "svm-ova";

/// One-vs-all composition: binary model `k` separates class `k` (`+1`) from
/// the rest (`-1`).
#[derive(Clone, Debug, PartialEq)]
pub struct MulticlassModel<F> {
    binaries: Vec<SvmBinaryModel<F>>,
    num_classes: usize,
}

/// Trains the `k` class-vs-rest problems. They run concurrently; each is an
/// independent deterministic solve, so the result equals sequential training.
///
/// Without an explicit cap each problem gets `SolverParams::default_max_iter(n, k)`.
pub fn train_one_vs_all<F: Scalar>(
    x: &[&[F]],
    labels: &[usize],
    k: usize,
    kernel: &KernelSpec<F>,
    params: &SolverParams<F>,
) -> Result<(MulticlassModel<F>, Vec<SolveSummary>)> {
    if k < 2 {
        return Err(Error::invalid("one-vs-all needs at least two classes"));
    }
    if labels.len() != x.len() {
        return Err(Error::invalid(format!("{} samples but {} labels", x.len(), labels.len())));
    }
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        if l >= k {
            return Err(Error::LabelOutOfRange {
                index: i,
                label: l,
                num_classes: k,
            });
        }
        counts[l] += 1;
    }
    if let Some(class) = counts.iter().position(|&c| c == 0) {
        return Err(Error::EmptyClass { class });
    }
    let mut params = params.clone();
    params.max_iter = Some(
        params
            .max_iter
            .unwrap_or_else(|| SolverParams::<F>::default_max_iter(x.len(), k)),
    );

    let trained: Vec<(SvmBinaryModel<F>, SolveSummary)> = (0..k)
        .into_par_iter()
        .map(|class| {
            let y: Vec<BinaryLabel> = labels
                .iter()
                .map(|&l| {
                    if l == class {
                        BinaryLabel::Positive
                    } else {
                        BinaryLabel::Negative
                    }
                })
                .collect();
            SvmBinaryModel::train(x, &y, kernel, &params)
        })
        .collect::<Result<_>>()?;
    let (binaries, summaries) = trained.into_iter().unzip();
    Ok((
        MulticlassModel {
            binaries,
            num_classes: k,
        },
        summaries,
    ))
}

impl<F: Scalar> MulticlassModel<F> {
    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn binaries(&self) -> &[SvmBinaryModel<F>] {
        &self.binaries
    }

    /// `f_k(x)` for every class.
    pub fn decision_values(&self, x: &[F]) -> Result<Vec<F>> {
        self.binaries.iter().map(|b| b.decision_value(x)).collect()
    }

    /// Argmax of the class-vs-rest values; lowest class id on ties.
    pub fn predict(&self, x: &[F]) -> Result<usize> {
        Ok(argmax(&self.decision_values(x)?))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{OVA_MAGIC} v1 k={}\n", self.num_classes);
        for b in &self.binaries {
            out.push_str(&b.to_text());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::ModelFormat("missing header".into()))?;
        let k: usize = header
            .strip_prefix(OVA_MAGIC)
            .and_then(|rest| rest.trim().strip_prefix("v1"))
            .and_then(|rest| rest.trim().strip_prefix("k="))
            .and_then(|k| k.trim().parse().ok())
            .ok_or_else(|| Error::ModelFormat(format!("bad one-vs-all header {header:?}")))?;
        if k < 2 {
            return Err(Error::ModelFormat("one-vs-all needs k >= 2".into()));
        }
        let binaries = (0..k)
            .map(|_| SvmBinaryModel::read_from(&mut lines))
            .collect::<Result<Vec<_>>>()?;
        let dim = binaries[0].dim();
        if binaries.iter().any(|b| b.dim() != dim || b.kernel().name() != binaries[0].kernel().name()) {
            return Err(Error::ModelFormat("binaries disagree on kernel family or dimension".into()));
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::ModelFormat("trailing data after model".into()));
        }
        Ok(Self {
            binaries,
            num_classes: k,
        })
    }
}
