//! SMO for the soft-margin dual
//!
//! ```text
//! min_a  f(a) = 1/2 a'Qa - e'a    Q_ij = y_i y_j k(x_i, x_j)
//! s.t.   y'a = 0,  0 <= a_i <= C
//! ```
//!
//! (the maximised dual objective is `-f`). Each iteration picks the maximal
//! violating pair, solves the two-variable subproblem in closed form and
//! updates the gradient `G = Qa - e`. The scan order is fixed, so the solve is
//! fully deterministic.

use serde::{Deserialize, Serialize};

use super::cache::KernelRows;
use super::{BinaryLabel, KernelSpec};
use crate::{Error, Result, Scalar};

/// Curvature floor for a non-positive two-variable Hessian.
const TAU: f64 = 1e-12;
/// Floor under the default iteration cap; first-order selection on small
/// rank-deficient problems can need thousands of steps.
const MIN_DEFAULT_ITER: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverParams<F> {
    /// Box constant `C`.
    pub c: F,
    /// Stop once the maximal violating pair gap drops below this.
    pub tol: F,
    /// Iteration cap. `None` means [`SolverParams::default_max_iter`] with two classes.
    pub max_iter: Option<usize>,
    /// Record the dual objective every this many iterations.
    pub trace_every: Option<usize>,
    /// Budget for the row cache of problems too large for a full kernel matrix.
    pub cache_bytes: usize,
}

impl<F: Scalar> Default for SolverParams<F> {
    fn default() -> Self {
        Self {
            c: F::one(),
            tol: F::lit(1e-3),
            max_iter: None,
            trace_every: None,
            cache_bytes: 200 << 20,
        }
    }
}

impl<F: Scalar> SolverParams<F> {
    pub fn with_c(mut self, c: F) -> Self {
        self.c = c;
        self
    }

    pub fn with_tol(mut self, tol: F) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = Some(max_iter);
        self
    }

    /// The default iteration cap, `10 * n * classes` but at least 100k.
    pub fn default_max_iter(n: usize, classes: usize) -> usize {
        (10 * n.max(1) * classes.max(2)).max(MIN_DEFAULT_ITER)
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > F::zero() && self.c.is_finite()) {
            return Err(Error::invalid(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol > F::zero() && self.tol.is_finite()) {
            return Err(Error::invalid(format!("tol must be positive, got {}", self.tol)));
        }
        if self.trace_every == Some(0) {
            return Err(Error::invalid("trace_every must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    /// The iteration cap was hit; the returned point is feasible but the KKT
    /// gap is still above `tol`.
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution<F> {
    pub alpha: Vec<F>,
    /// `b` in `f(x) = sum_i alpha_i y_i k(x_i, x) + b`.
    pub bias: F,
    /// Dual objective `sum a - 1/2 a'Qa` at `alpha`.
    pub objective: F,
    /// Maximal violating pair gap at exit.
    pub kkt_gap: F,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Dual objective sampled every `trace_every` iterations, plus the final value.
    pub objective_trace: Vec<F>,
}

/// Scalar-free digest of a solve, for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub status: SolveStatus,
    pub iterations: usize,
    pub kkt_gap: f64,
    pub objective: f64,
    pub support_vectors: usize,
}

impl<F: Scalar> DualSolution<F> {
    pub fn summary(&self) -> SolveSummary {
        SolveSummary {
            status: self.status,
            iterations: self.iterations,
            kkt_gap: self.kkt_gap.as_f64(),
            objective: self.objective.as_f64(),
            support_vectors: self.alpha.iter().filter(|&&a| a > F::zero()).count(),
        }
    }
}

/// Solves the dual QP for `(x, y)`.
///
/// The returned `alpha` lies in `[0, C]` exactly; `y'alpha = 0` holds up to
/// rounding. The bias is the mean of `-y_i G_i` over free variables, or the
/// midpoint of the bound-derived interval when no variable is free.
pub fn solve_dual<F: Scalar>(
    x: &[&[F]],
    y: &[BinaryLabel],
    kernel: &KernelSpec<F>,
    params: &SolverParams<F>,
) -> Result<DualSolution<F>> {
    params.validate()?;
    kernel.validate()?;
    let n = x.len();
    if y.len() != n {
        return Err(Error::invalid(format!("{n} samples but {} labels", y.len())));
    }
    if !y.contains(&BinaryLabel::Positive) {
        return Err(Error::SingleClass("-1"));
    }
    if !y.contains(&BinaryLabel::Negative) {
        return Err(Error::SingleClass("+1"));
    }
    let d = x[0].len();
    if let Some((i, xi)) = x.iter().enumerate().find(|(_, xi)| xi.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: xi.len(),
            index: Some(i),
        });
    }

    let c = params.c;
    let max_iter = params
        .max_iter
        .unwrap_or_else(|| SolverParams::<F>::default_max_iter(n, 2));
    let ys: Vec<F> = y.iter().map(|l| l.sign()).collect();
    let mut rows = KernelRows::new(x, *kernel, params.cache_bytes);
    let mut alpha = vec![F::zero(); n];
    let mut grad = vec![-F::one(); n];
    let mut trace = Vec::new();
    let mut iterations = 0;

    let (status, kkt_gap) = loop {
        let (pair, gap) = select_pair(&alpha, &grad, &ys, c);
        let Some((i, j)) = pair else {
            break (SolveStatus::Converged, gap.max(F::zero()));
        };
        if gap < params.tol {
            break (SolveStatus::Converged, gap);
        }
        if iterations >= max_iter {
            break (SolveStatus::IterationLimit, gap);
        }
        if let Some(every) = params.trace_every {
            if iterations % every == 0 {
                trace.push(objective_from_grad(&alpha, &grad));
            }
        }

        let ki = rows.row(i);
        let kj = rows.row(j);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        update_pair(&mut alpha, &grad, &ys, c, i, j, rows.diag(i), rows.diag(j), ki[j]);

        let di = (alpha[i] - old_i) * ys[i];
        let dj = (alpha[j] - old_j) * ys[j];
        for t in 0..n {
            grad[t] = grad[t] + ys[t] * (ki[t] * di + kj[t] * dj);
        }
        iterations += 1;
    };

    let objective = objective_from_grad(&alpha, &grad);
    if params.trace_every.is_some() {
        trace.push(objective);
    }
    Ok(DualSolution {
        bias: bias_from_grad(&alpha, &grad, &ys, c),
        alpha,
        objective,
        kkt_gap,
        iterations,
        status,
        objective_trace: trace,
    })
}

/// Maximal violating pair: `i` maximises `-y_t G_t` over the up set, `j`
/// minimises it over the low set. Returns the pair (if both sets are
/// non-empty) and the gap `m(a) - M(a)`. First index wins ties.
fn select_pair<F: Scalar>(
    alpha: &[F],
    grad: &[F],
    ys: &[F],
    c: F,
) -> (Option<(usize, usize)>, F) {
    let mut up = (None, F::neg_infinity());
    let mut low = (None, F::infinity());
    for t in 0..alpha.len() {
        let v = -ys[t] * grad[t];
        let positive = ys[t] > F::zero();
        let below_c = alpha[t] < c;
        let above_0 = alpha[t] > F::zero();
        if ((positive && below_c) || (!positive && above_0)) && v > up.1 {
            up = (Some(t), v);
        }
        if ((positive && above_0) || (!positive && below_c)) && v < low.1 {
            low = (Some(t), v);
        }
    }
    match (up.0, low.0) {
        (Some(i), Some(j)) => (Some((i, j)), up.1 - low.1),
        _ => (None, F::zero()),
    }
}

/// Closed-form two-variable step, clipped to the box.
#[allow(clippy::too_many_arguments)]
fn update_pair<F: Scalar>(
    alpha: &mut [F],
    grad: &[F],
    ys: &[F],
    c: F,
    i: usize,
    j: usize,
    kii: F,
    kjj: F,
    kij: F,
) {
    let zero = F::zero();
    let tau = F::lit(TAU);
    if ys[i] != ys[j] {
        let mut quad = kii + kjj - kij - kij;
        if quad <= zero {
            quad = tau;
        }
        let delta = (-grad[i] - grad[j]) / quad;
        let diff = alpha[i] - alpha[j];
        alpha[i] = alpha[i] + delta;
        alpha[j] = alpha[j] + delta;
        if diff > zero {
            if alpha[j] < zero {
                alpha[j] = zero;
                alpha[i] = diff;
            }
        } else if alpha[i] < zero {
            alpha[i] = zero;
            alpha[j] = -diff;
        }
        if diff > zero {
            if alpha[i] > c {
                alpha[i] = c;
                alpha[j] = c - diff;
            }
        } else if alpha[j] > c {
            alpha[j] = c;
            alpha[i] = c + diff;
        }
    } else {
        let mut quad = kii + kjj - kij - kij;
        if quad <= zero {
            quad = tau;
        }
        let delta = (grad[i] - grad[j]) / quad;
        let sum = alpha[i] + alpha[j];
        alpha[i] = alpha[i] - delta;
        alpha[j] = alpha[j] + delta;
        if sum > c {
            if alpha[i] > c {
                alpha[i] = c;
                alpha[j] = sum - c;
            }
        } else if alpha[j] < zero {
            alpha[j] = zero;
            alpha[i] = sum;
        }
        if sum > c {
            if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = sum - c;
            }
        } else if alpha[i] < zero {
            alpha[i] = zero;
            alpha[j] = sum;
        }
    }
}

/// `sum a - 1/2 a'Qa` using `Qa = G + e`.
fn objective_from_grad<F: Scalar>(alpha: &[F], grad: &[F]) -> F {
    let half = F::lit(0.5);
    alpha
        .iter()
        .zip(grad)
        .fold(F::zero(), |acc, (&a, &g)| acc + a * (F::one() - g) * half)
}

fn bias_from_grad<F: Scalar>(alpha: &[F], grad: &[F], ys: &[F], c: F) -> F {
    let mut ub = F::infinity();
    let mut lb = F::neg_infinity();
    let mut free_sum = F::zero();
    let mut free = 0usize;
    for t in 0..alpha.len() {
        let yg = ys[t] * grad[t];
        let positive = ys[t] > F::zero();
        if alpha[t] >= c {
            if positive {
                lb = lb.max(yg);
            } else {
                ub = ub.min(yg);
            }
        } else if alpha[t] <= F::zero() {
            if positive {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            free_sum = free_sum + yg;
        }
    }
    let rho = if free > 0 {
        free_sum / F::lit(free as f64)
    } else {
        (ub + lb) * F::lit(0.5)
    };
    -rho
}

/// Dual objective `sum a - 1/2 sum_ij a_i a_j y_i y_j k(x_i, x_j)` evaluated
/// directly, independent of the solver state.
pub fn dual_objective<F: Scalar>(
    x: &[&[F]],
    y: &[BinaryLabel],
    kernel: &KernelSpec<F>,
    alpha: &[F],
) -> F {
    let n = x.len();
    let mut quad = F::zero();
    for i in 0..n {
        for j in 0..n {
            quad = quad
                + alpha[i] * alpha[j] * y[i].sign::<F>() * y[j].sign::<F>() * kernel.apply(x[i], x[j]);
        }
    }
    alpha.iter().copied().sum::<F>() - F::lit(0.5) * quad
}
