//! Independent oracles shared by the integration tests. Nothing here calls
//! into the solver or the PNN scoring path.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use pnn_training::svm::BinaryLabel;
use pnn_training::KernelSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn kernel(spec: &KernelSpec<f64>, a: &[f64], b: &[f64]) -> f64 {
    match *spec {
        KernelSpec::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
        KernelSpec::Rbf { gamma } => {
            let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            (-gamma * d2).exp()
        }
    }
}

pub fn sign(l: BinaryLabel) -> f64 {
    match l {
        BinaryLabel::Positive => 1.0,
        BinaryLabel::Negative => -1.0,
    }
}

/// `Q_ij = y_i y_j k(x_i, x_j)`
pub fn q_matrix(x: &[Vec<f64>], y: &[BinaryLabel], spec: &KernelSpec<f64>) -> Vec<Vec<f64>> {
    let n = x.len();
    (0..n)
        .map(|i| (0..n).map(|j| sign(y[i]) * sign(y[j]) * kernel(spec, &x[i], &x[j])).collect())
        .collect()
}

pub fn dual_value(q: &[Vec<f64>], alpha: &[f64]) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * q[i][j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Brute-force grid search: `alpha_1..alpha_{n-1}` on multiples of `C/steps`,
/// `alpha_n` solved from `y'alpha = 0` and kept only if inside the box.
/// Every evaluated point is feasible, so the result is a lower bound on the
/// optimum. Cost is `(steps+1)^(n-1)`; use for small `n`.
pub fn grid_oracle(x: &[Vec<f64>], y: &[BinaryLabel], spec: &KernelSpec<f64>, c: f64, steps: usize) -> f64 {
    let n = x.len();
    let q = q_matrix(x, y, spec);
    let ys: Vec<f64> = y.iter().map(|&l| sign(l)).collect();
    let mut idx = vec![0usize; n - 1];
    let mut alpha = vec![0.0; n];
    let mut best = f64::NEG_INFINITY;
    loop {
        let mut s = 0.0;
        for k in 0..n - 1 {
            alpha[k] = c * idx[k] as f64 / steps as f64;
            s += ys[k] * alpha[k];
        }
        let last = -s * ys[n - 1];
        if (-1e-12..=c + 1e-12).contains(&last) {
            alpha[n - 1] = last.clamp(0.0, c);
            best = best.max(dual_value(&q, &alpha));
        }
        // odometer
        let mut k = 0;
        loop {
            if k == n - 1 {
                return best;
            }
            idx[k] += 1;
            if idx[k] <= steps {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Exact optimum by enumerating which variables sit at 0, at C or strictly
/// inside, and solving the stationarity system of the free ones.
pub fn active_set_oracle(x: &[Vec<f64>], y: &[BinaryLabel], spec: &KernelSpec<f64>, c: f64) -> (f64, Vec<f64>) {
    let n = x.len();
    let q = q_matrix(x, y, spec);
    let ys: Vec<f64> = y.iter().map(|&l| sign(l)).collect();
    let mut best = (f64::NEG_INFINITY, vec![0.0; n]);
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut state = vec![0u8; n];
        let mut v = code;
        for s in state.iter_mut() {
            *s = (v % 3) as u8;
            v /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut alpha: Vec<f64> = state.iter().map(|&s| if s == 1 { c } else { 0.0 }).collect();
        if free.is_empty() {
            let eq: f64 = (0..n).map(|i| ys[i] * alpha[i]).sum();
            if eq.abs() > 1e-9 * c.max(1.0) {
                continue;
            }
        } else {
            // [Q_FF y_F; y_F' 0] [a_F; lambda] = [1 - Q_FB a_B; -y_B' a_B]
            let m = free.len();
            let mut a = DMatrix::<f64>::zeros(m + 1, m + 1);
            let mut rhs = DVector::<f64>::zeros(m + 1);
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[(r, s)] = q[i][j];
                }
                a[(r, m)] = ys[i];
                a[(m, r)] = ys[i];
                let fixed: f64 = (0..n).filter(|j| state[*j] != 2).map(|j| q[i][j] * alpha[j]).sum();
                rhs[r] = 1.0 - fixed;
            }
            rhs[m] = -(0..n).filter(|j| state[*j] != 2).map(|j| ys[j] * alpha[j]).sum::<f64>();
            let svd = a.clone().svd(false, false);
            let smax = svd.singular_values.max();
            let smin = svd.singular_values.min();
            if smin <= 1e-10 * smax.max(1.0) {
                continue;
            }
            let Some(sol) = a.lu().solve(&rhs) else { continue };
            let mut ok = true;
            for (r, &i) in free.iter().enumerate() {
                let v = sol[r];
                if v < -1e-9 || v > c + 1e-9 {
                    ok = false;
                    break;
                }
                alpha[i] = v.clamp(0.0, c);
            }
            if !ok {
                continue;
            }
        }
        let val = dual_value(&q, &alpha);
        if val > best.0 {
            best = (val, alpha);
        }
    }
    best
}

/// Random binary problem with both labels present.
pub fn random_problem(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> (Vec<Vec<f64>>, Vec<BinaryLabel>) {
    loop {
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let y: Vec<BinaryLabel> = (0..n)
            .map(|_| if rng.random_bool(0.5) { BinaryLabel::Positive } else { BinaryLabel::Negative })
            .collect();
        if y.contains(&BinaryLabel::Positive) && y.contains(&BinaryLabel::Negative) {
            return (x, y);
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Naive Parzen sums: `g_c = sum_{j in c} exp((w_j . x/|x| - 1) / sigma^2)`
/// with `w_j = p_j / |p_j|`, straight from the raw patterns.
pub fn parzen_oracle(patterns: &[Vec<f64>], classes: &[usize], k: usize, sigma: f64, x: &[f64]) -> Vec<f64> {
    let unit = |v: &[f64]| {
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter().map(|a| a / n).collect::<Vec<f64>>()
    };
    let xh = unit(x);
    let mut g = vec![0.0; k];
    for (p, &c) in patterns.iter().zip(classes) {
        let w = unit(p);
        let z: f64 = w.iter().zip(&xh).map(|(a, b)| a * b).sum();
        g[c] += ((z - 1.0) / (sigma * sigma)).exp();
    }
    g
}

/// Class of the stored pattern with the largest cosine to `x`.
pub fn cosine_nearest(patterns: &[Vec<f64>], classes: &[usize], x: &[f64]) -> usize {
    let cos = |a: &[f64], b: &[f64]| {
        let d: f64 = a.iter().zip(b).map(|(p, q)| p * q).sum();
        d / (a.iter().map(|p| p * p).sum::<f64>().sqrt() * b.iter().map(|q| q * q).sum::<f64>().sqrt())
    };
    let mut best = 0;
    for j in 1..patterns.len() {
        if cos(&patterns[j], x) > cos(&patterns[best], x) {
            best = j;
        }
    }
    classes[best]
}

pub fn random_pnn_instance(rng: &mut ChaCha8Rng) -> (Vec<Vec<f64>>, Vec<usize>, usize, Vec<f64>) {
    let dim = rng.random_range(2..6);
    let k = rng.random_range(2..5);
    let n = rng.random_range(1..20);
    let patterns: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect())
        .collect();
    let classes: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
    (patterns, classes, k, x)
}
