use std::fmt::Write as _;

use super::smo::{solve_dual, DualSolution, SolveSummary, SolverParams};
use super::{BinaryLabel, KernelSpec};
use crate::scalar::dot;
use crate::{Error, Result, Scalar};

const BINARY_MAGIC: &str = "svm-binary";
const FORMAT_VERSION: &str = "v1";

/// Trained two-class SVM: `f(x) = sum_i coeff_i k(sv_i, x) + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct SvmBinaryModel<F> {
    support_vectors: Vec<F>,
    coeffs: Vec<F>,
    bias: F,
    kernel: KernelSpec<F>,
    c: F,
    dim: usize,
    /// Collapsed primal weights for the linear kernel.
    linear_weights: Option<Vec<F>>,
}

impl<F: Scalar> SvmBinaryModel<F> {
    /// Solves the dual for `(x, y)` and keeps the support vectors.
    pub fn train(
        x: &[&[F]],
        y: &[BinaryLabel],
        kernel: &KernelSpec<F>,
        params: &SolverParams<F>,
    ) -> Result<(Self, SolveSummary)> {
        let sol = solve_dual(x, y, kernel, params)?;
        let summary = sol.summary();
        Ok((Self::from_solution(x, y, &sol, *kernel, params.c), summary))
    }

    /// Keeps samples with `alpha_i > 0`, storing `alpha_i y_i`.
    pub fn from_solution(
        x: &[&[F]],
        y: &[BinaryLabel],
        solution: &DualSolution<F>,
        kernel: KernelSpec<F>,
        c: F,
    ) -> Self {
        let dim = x.first().map_or(0, |r| r.len());
        let mut support_vectors = Vec::new();
        let mut coeffs = Vec::new();
        for ((xi, yi), &a) in x.iter().zip(y).zip(&solution.alpha) {
            if a > F::zero() {
                support_vectors.extend_from_slice(xi);
                coeffs.push(a * yi.sign::<F>());
            }
        }
        Self::assemble(support_vectors, coeffs, solution.bias, kernel, c, dim)
    }

    fn assemble(
        support_vectors: Vec<F>,
        coeffs: Vec<F>,
        bias: F,
        kernel: KernelSpec<F>,
        c: F,
        dim: usize,
    ) -> Self {
        let linear_weights = matches!(kernel, KernelSpec::Linear).then(|| {
            let mut w = vec![F::zero(); dim];
            for (sv, &a) in support_vectors.chunks_exact(dim.max(1)).zip(&coeffs) {
                for (wk, &v) in w.iter_mut().zip(sv) {
                    *wk = *wk + a * v;
                }
            }
            w
        });
        Self {
            support_vectors,
            coeffs,
            bias,
            kernel,
            c,
            dim,
            linear_weights,
        }
    }

    pub fn num_support_vectors(&self) -> usize {
        self.coeffs.len()
    }

    pub fn support_vector(&self, i: usize) -> &[F] {
        &self.support_vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn support_vectors(&self) -> impl Iterator<Item = &[F]> {
        self.support_vectors.chunks_exact(self.dim.max(1))
    }

    /// `alpha_i y_i` per support vector.
    pub fn coefficients(&self) -> &[F] {
        &self.coeffs
    }

    pub fn bias(&self) -> F {
        self.bias
    }

    pub fn kernel(&self) -> &KernelSpec<F> {
        &self.kernel
    }

    pub fn c(&self) -> F {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Signed margin value `f(x)`.
    pub fn decision_value(&self, x: &[F]) -> Result<F> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
                index: None,
            });
        }
        let raw = match &self.linear_weights {
            Some(w) => dot(w, x),
            None => self
                .support_vectors()
                .zip(&self.coeffs)
                .fold(F::zero(), |acc, (sv, &a)| acc + a * self.kernel.apply(sv, x)),
        };
        Ok(raw + self.bias)
    }

    /// `+1` when `f(x) >= 0`.
    pub fn predict(&self, x: &[F]) -> Result<BinaryLabel> {
        Ok(label_of_value(self.decision_value(x)?))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let gamma = self
            .kernel
            .gamma()
            .map_or_else(|| "-".to_string(), |g| g.to_string());
        writeln!(
            out,
            "{BINARY_MAGIC} {FORMAT_VERSION} kernel={} gamma={gamma} c={} d={} m={} b={}",
            self.kernel.name(),
            self.c,
            self.dim,
            self.coeffs.len(),
            self.bias
        )
        .unwrap();
        for (sv, a) in self.support_vectors().zip(&self.coeffs) {
            out.push_str(&a.to_string());
            for v in sv {
                out.push(' ');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let model = Self::read_from(&mut lines)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::ModelFormat("trailing data after model".into()));
        }
        Ok(model)
    }

    /// Reads one model block, leaving following lines in `lines`.
    pub(crate) fn read_from<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<Self> {
        let header = lines
            .next()
            .ok_or_else(|| Error::ModelFormat("missing header".into()))?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some(BINARY_MAGIC) {
            return Err(Error::ModelFormat(format!("not a binary model header: {header:?}")));
        }
        if tokens.next() != Some(FORMAT_VERSION) {
            return Err(Error::ModelFormat(format!("unsupported version in {header:?}")));
        }
        let mut field = |key: &str| -> Result<&str> {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::ModelFormat(format!("missing {key}")))?;
            tok.strip_prefix(key)
                .and_then(|t| t.strip_prefix('='))
                .ok_or_else(|| Error::ModelFormat(format!("expected {key}=..., got {tok:?}")))
        };
        let family = field("kernel")?.to_string();
        let gamma = field("gamma")?.to_string();
        let c: F = parse_num(field("c")?)?;
        let dim: usize = parse_num(field("d")?)?;
        let m: usize = parse_num(field("m")?)?;
        let bias: F = parse_num(field("b")?)?;
        let kernel = match family.as_str() {
            "linear" => KernelSpec::Linear,
            "rbf" => KernelSpec::rbf(parse_num(&gamma)?)?,
            other => return Err(Error::ModelFormat(format!("unknown kernel {other:?}"))),
        };

        let mut support_vectors = Vec::with_capacity(m * dim);
        let mut coeffs = Vec::with_capacity(m);
        for k in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::ModelFormat(format!("expected {m} support vectors, got {k}")))?;
            let values = line
                .split_whitespace()
                .map(parse_num::<F>)
                .collect::<Result<Vec<F>>>()?;
            if values.len() != dim + 1 {
                return Err(Error::ModelFormat(format!(
                    "support vector {k}: expected {} values, got {}",
                    dim + 1,
                    values.len()
                )));
            }
            coeffs.push(values[0]);
            support_vectors.extend_from_slice(&values[1..]);
        }
        Ok(Self::assemble(support_vectors, coeffs, bias, kernel, c, dim))
    }
}

pub(crate) fn label_of_value<F: Scalar>(v: F) -> BinaryLabel {
    if v >= F::zero() {
        BinaryLabel::Positive
    } else {
        BinaryLabel::Negative
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::ModelFormat(format!("bad number {s:?}")))
}

/// Primal slacks `xi_i = max(0, 1 - y_i f(x_i))` of a trained model.
pub fn hinge_slacks<F: Scalar>(
    model: &SvmBinaryModel<F>,
    x: &[&[F]],
    y: &[BinaryLabel],
) -> Result<Vec<F>> {
    x.iter()
        .zip(y)
        .map(|(xi, yi)| {
            let f = model.decision_value(xi)?;
            Ok((F::one() - yi.sign::<F>() * f).max(F::zero()))
        })
        .collect()
}
