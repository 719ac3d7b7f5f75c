use serde::{Deserialize, Serialize};

use crate::scalar::{dot, squared_distance};
use crate::{Error, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum KernelSpec<F> {
    /// `x . y`
    Linear,
    /// `exp(-gamma |x - y|^2)`
    Rbf { gamma: F },
}

impl<F: Scalar> KernelSpec<F> {
    pub fn rbf(gamma: F) -> Result<Self> {
        let k = KernelSpec::Rbf { gamma };
        k.validate()?;
        Ok(k)
    }

    /// RBF with `gamma = 1 / dim`.
    pub fn default_rbf(dim: usize) -> Self {
        KernelSpec::Rbf {
            gamma: F::one() / F::lit(dim.max(1) as f64),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Rbf { gamma } if gamma > F::zero() && gamma.is_finite() => Ok(()),
            KernelSpec::Rbf { gamma } => Err(Error::invalid(format!(
                "rbf gamma must be positive and finite, got {gamma}"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Rbf { .. } => "rbf",
        }
    }

    pub fn gamma(&self) -> Option<F> {
        match *self {
            KernelSpec::Linear => None,
            KernelSpec::Rbf { gamma } => Some(gamma),
        }
    }

    pub fn eval(&self, x: &[F], y: &[F]) -> Result<F> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
                index: None,
            });
        }
        Ok(self.apply(x, y))
    }

    /// Unchecked evaluation; callers guarantee equal lengths.
    #[inline]
    pub(crate) fn apply(&self, x: &[F], y: &[F]) -> F {
        match *self {
            KernelSpec::Linear => dot(x, y),
            KernelSpec::Rbf { gamma } => (-gamma * squared_distance(x, y)).exp(),
        }
    }
}

pub fn kernel_eval<F: Scalar>(spec: &KernelSpec<F>, x: &[F], y: &[F]) -> Result<F> {
    spec.eval(x, y)
}
