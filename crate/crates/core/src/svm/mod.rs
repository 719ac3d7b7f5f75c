//! Soft-margin kernel SVM trained through its dual QP.

mod cache;
mod kernel;
mod model;
mod multiclass;
mod smo;

pub use kernel::{kernel_eval, KernelSpec};
pub use model::{hinge_slacks, SvmBinaryModel};
pub(crate) use model::label_of_value;
pub use multiclass::{train_one_vs_all, MulticlassModel};
pub use smo::{dual_objective, solve_dual, DualSolution, SolveStatus, SolveSummary, SolverParams};

use serde::{Deserialize, Serialize};

/// Target of a binary problem, `-1` or `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinaryLabel {
    Negative,
    Positive,
}

impl BinaryLabel {
    #[inline]
    pub fn sign<F: crate::Scalar>(self) -> F {
        match self {
            BinaryLabel::Negative => -F::one(),
            BinaryLabel::Positive => F::one(),
        }
    }

    /// Class id 1 maps to `+1`, anything else to `-1`.
    pub fn from_class(class: usize) -> Self {
        if class == 1 {
            BinaryLabel::Positive
        } else {
            BinaryLabel::Negative
        }
    }

    pub fn to_class(self) -> usize {
        match self {
            BinaryLabel::Negative => 0,
            BinaryLabel::Positive => 1,
        }
    }
}
