use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{split_semi_supervised, LabeledAmount, Sample, SplitDataset};
use crate::{Error, Result, Scalar};

pub const DEFAULT_NOISE_STD: f64 = 0.1;

const TEST_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed of the held-out two-moons draw paired with training seed `seed`.
pub fn two_moons_test_seed(seed: u64) -> u64 {
    seed ^ TEST_STREAM
}

/// Two interleaving half circles in the plane.
///
/// Class 0 follows `(cos t, sin t)` (upper arc), class 1 follows
/// `(1 - cos t, 0.5 - sin t)` (lower arc), with `t` evenly spaced over
/// `[0, pi]` (`t = 0` when `n_per_class == 1`). Isotropic Gaussian noise of
/// standard deviation `noise_std` is added to every coordinate, drawn from a
/// ChaCha8 stream seeded with `seed` in sample order, x before y.
///
/// Output order: all class 0 samples, then all class 1 samples.
pub fn generate_two_moons<F: Scalar>(
    n_per_class: usize,
    noise_std: f64,
    seed: u64,
) -> Result<Vec<Sample<F>>> {
    if n_per_class == 0 {
        return Err(Error::invalid("n_per_class must be at least 1"));
    }
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(Error::invalid(format!("noise_std must be >= 0, got {noise_std}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Normal::new only fails for a non-finite std, excluded above.
    let noise = Normal::new(0.0, noise_std).expect("valid std");
    let step = if n_per_class > 1 {
        PI / (n_per_class - 1) as f64
    } else {
        0.0
    };

    let mut out = Vec::with_capacity(2 * n_per_class);
    for class in 0..2 {
        for i in 0..n_per_class {
            let t = step * i as f64;
            let (x, y) = if class == 0 {
                (t.cos(), t.sin())
            } else {
                (1.0 - t.cos(), 0.5 - t.sin())
            };
            let (nx, ny) = if noise_std > 0.0 {
                (noise.sample(&mut rng), noise.sample(&mut rng))
            } else {
                (0.0, 0.0)
            };
            out.push(Sample::labeled(vec![F::lit(x + nx), F::lit(y + ny)], class));
        }
    }
    Ok(out)
}

/// One two-moons trial: a training draw seeded with `seed`, split with `seed`
/// into `labeled_per_class` labeled samples per class and the rest unlabeled,
/// plus an independent test draw of the same size seeded with
/// [`two_moons_test_seed`].
pub fn two_moons_trial<F: Scalar>(
    n_per_class: usize,
    labeled_per_class: usize,
    noise_std: f64,
    test_per_class: usize,
    seed: u64,
) -> Result<SplitDataset<F>> {
    let train = generate_two_moons(n_per_class, noise_std, seed)?;
    let test = generate_two_moons(test_per_class, noise_std, two_moons_test_seed(seed))?;
    split_semi_supervised(train, test, LabeledAmount::PerClass(labeled_per_class), seed)
}
