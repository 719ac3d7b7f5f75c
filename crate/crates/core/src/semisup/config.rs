use serde::{Deserialize, Serialize};

use crate::pnn::{DEFAULT_SIGMA, SIGMA_GRID};
use crate::svm::{KernelSpec, SolverParams};
use crate::{Error, Result, Scalar};

/// How the PNN window width is chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaChoice {
    Fixed(f64),
    /// Leave-one-out on the labeled pool over this grid.
    LeaveOneOut(Vec<f64>),
}

impl SigmaChoice {
    pub fn default_grid() -> Self {
        SigmaChoice::LeaveOneOut(SIGMA_GRID.to_vec())
    }

    pub fn describe(&self) -> String {
        match self {
            SigmaChoice::Fixed(s) => format!("fixed:{s}"),
            SigmaChoice::LeaveOneOut(g) => {
                let g: Vec<String> = g.iter().map(f64::to_string).collect();
                format!("loo:{}", g.join(","))
            }
        }
    }
}

/// Hyperparameters shared by every pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig<F> {
    pub sigma: SigmaChoice,
    /// Constant coordinate appended to PNN inputs before normalization.
    pub pnn_bias: Option<f64>,
    pub kernel: KernelSpec<F>,
    pub c: F,
    pub tol: F,
    pub max_iter: Option<usize>,
    /// Seed of the split this configuration runs on; echoed in reports.
    pub seed: u64,
}

impl<F: Scalar> PipelineConfig<F> {
    /// `C = 1`, RBF with `gamma = 1/dim`, `sigma = 1`, `tol = 1e-3`.
    pub fn for_dim(dim: usize) -> Self {
        Self {
            sigma: SigmaChoice::Fixed(DEFAULT_SIGMA),
            pnn_bias: None,
            kernel: KernelSpec::default_rbf(dim),
            c: F::one(),
            tol: F::lit(1e-3),
            max_iter: None,
            seed: 0,
        }
    }

    pub fn with_sigma(mut self, sigma: SigmaChoice) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_pnn_bias(mut self, bias: Option<f64>) -> Self {
        self.pnn_bias = bias;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match &self.sigma {
            SigmaChoice::Fixed(s) if !(*s > 0.0 && s.is_finite()) => {
                return Err(Error::invalid(format!("sigma must be positive, got {s}")))
            }
            SigmaChoice::LeaveOneOut(g) if g.is_empty() || g.iter().any(|s| !(*s > 0.0 && s.is_finite())) => {
                return Err(Error::invalid("sigma grid must be non-empty and positive"))
            }
            _ => {}
        }
        if let Some(b) = self.pnn_bias {
            if !b.is_finite() || b == 0.0 {
                return Err(Error::invalid(format!("pnn bias must be finite and non-zero, got {b}")));
            }
        }
        self.kernel.validate()?;
        if !(self.c > F::zero() && self.tol > F::zero()) {
            return Err(Error::invalid("C and tol must be positive"));
        }
        Ok(())
    }

    pub fn solver_params(&self) -> SolverParams<F> {
        SolverParams {
            c: self.c,
            tol: self.tol,
            max_iter: self.max_iter,
            ..SolverParams::default()
        }
    }
}

/// Self-training schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfTrainingParams {
    /// Fraction of the remaining pool moved per round (at least one sample).
    pub confidence_quantile: f64,
    pub max_rounds: usize,
}

impl Default for SelfTrainingParams {
    fn default() -> Self {
        Self {
            confidence_quantile: 0.1,
            max_rounds: 50,
        }
    }
}

impl SelfTrainingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.confidence_quantile > 0.0 && self.confidence_quantile <= 1.0) {
            return Err(Error::invalid(format!(
                "confidence quantile must be in (0, 1], got {}",
                self.confidence_quantile
            )));
        }
        Ok(())
    }
}
