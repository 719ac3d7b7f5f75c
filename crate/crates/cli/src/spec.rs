use std::path::PathBuf;

use pnn_training::dataset::{
    generate_two_moons, load_usps, locate_usps, read_samples, split_semi_supervised, two_moons_test_seed,
    UspsOptions, DEFAULT_NOISE_STD,
};
use pnn_training::pnn::SIGMA_GRID;
use pnn_training::semisup::Method;
use pnn_training::{
    KernelSpec64, LabeledAmount, PipelineConfig64, Sample64, SelfTrainingParams, SigmaChoice, SplitDataset64,
};

use crate::exit::Failure;
use crate::options::{Experiment, KernelArg, MethodArg, Options};

/// Environment variable naming the default dataset directory.
pub const DATA_DIR_VAR: &str = "PNN_DATA_DIR";

const DEFAULT_OUT_DIR: &str = "results";
const DEFAULT_SEED: u64 = 1;
const MOONS_N_PER_CLASS: usize = 50;
const MOONS_LABELED_PER_CLASS: usize = 10;
const MOONS_REPEATS: usize = 20;
const MOONS_PNN_BIAS: f64 = 1.0;
const FILE_LABELED_FRACTION: f64 = 0.10;

/// Where a run's samples come from.
#[derive(Clone, Debug, PartialEq)]
pub enum DataSpec {
    TwoMoons {
        n_per_class: usize,
        noise: f64,
        test_per_class: usize,
    },
    Usps {
        train: PathBuf,
        test: PathBuf,
        label_offset: usize,
    },
    File {
        train: PathBuf,
        test: PathBuf,
    },
}

/// A fully resolved run: every default applied.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub experiment: Experiment,
    pub method: Method,
    pub data: DataSpec,
    pub amount: LabeledAmount,
    pub sigma: SigmaChoice,
    pub pnn_bias: Option<f64>,
    pub kernel: KernelArg,
    pub c: f64,
    pub gamma: Option<f64>,
    pub tol: f64,
    pub max_iter: Option<usize>,
    pub seed: u64,
    pub repeats: usize,
    pub self_training: SelfTrainingParams,
    pub out_dir: PathBuf,
    pub strict: bool,
}

impl RunSpec {
    pub fn resolve(experiment: Experiment, method: MethodArg, o: Options) -> Result<Self, Failure> {
        let moons = experiment == Experiment::TwoMoons;
        let data = match experiment {
            Experiment::TwoMoons => {
                if o.train.is_some() || o.test.is_some() {
                    return Err(Failure::BadArgs("two-moons does not read --train/--test".into()));
                }
                let n_per_class = o.n_per_class.unwrap_or(MOONS_N_PER_CLASS);
                DataSpec::TwoMoons {
                    n_per_class,
                    noise: o.noise.unwrap_or(DEFAULT_NOISE_STD),
                    test_per_class: o.test_per_class.unwrap_or(n_per_class),
                }
            }
            Experiment::Usps => {
                let (train, test, found) = match (o.train, o.test) {
                    (Some(tr), Some(te)) => (tr, te, None),
                    (None, None) => {
                        let dir = std::env::var(DATA_DIR_VAR).unwrap_or_else(|_| "data".into());
                        let (tr, te, opts) = locate_usps(&dir).ok_or_else(|| {
                            Failure::DataIo(format!(
                                "no USPS files (zip.train/zip.test or usps/usps.t) in {dir:?}; pass --train/--test or set {DATA_DIR_VAR}"
                            ))
                        })?;
                        (tr, te, Some(opts.label_offset))
                    }
                    _ => return Err(Failure::BadArgs("--train and --test must be given together".into())),
                };
                DataSpec::Usps {
                    train,
                    test,
                    label_offset: o.label_offset.or(found).unwrap_or(0),
                }
            }
            Experiment::CustomFile => match (o.train, o.test) {
                (Some(train), Some(test)) => DataSpec::File { train, test },
                _ => return Err(Failure::BadArgs("custom-file needs --train and --test".into())),
            },
        };
        if !moons && (o.n_per_class.is_some() || o.noise.is_some() || o.test_per_class.is_some()) {
            return Err(Failure::BadArgs(
                "--n-per-class, --noise and --test-per-class only apply to two-moons".into(),
            ));
        }
        if experiment != Experiment::Usps && o.label_offset.is_some() {
            return Err(Failure::BadArgs("--label-offset only applies to usps".into()));
        }

        let amount = match (o.labeled_per_class, o.labeled_fraction) {
            (Some(m), None) => LabeledAmount::PerClass(m),
            (None, Some(f)) => LabeledAmount::Fraction(f),
            (None, None) if moons => LabeledAmount::PerClass(MOONS_LABELED_PER_CLASS),
            (None, None) => LabeledAmount::Fraction(FILE_LABELED_FRACTION),
            (Some(_), Some(_)) => {
                return Err(Failure::BadArgs(
                    "--labeled-per-class and --labeled-fraction are exclusive".into(),
                ))
            }
        };
        let sigma = match (o.sigma, o.sigma_grid) {
            (Some(s), None) => SigmaChoice::Fixed(s),
            (None, Some(g)) if !g.is_empty() => SigmaChoice::LeaveOneOut(g),
            (None, None) => SigmaChoice::LeaveOneOut(SIGMA_GRID.to_vec()),
            _ => return Err(Failure::BadArgs("give either --sigma or a non-empty --sigma-grid".into())),
        };
        let kernel = o.kernel.unwrap_or(KernelArg::Rbf);
        if kernel == KernelArg::Linear && o.gamma.is_some() {
            return Err(Failure::BadArgs("--gamma only applies to the rbf kernel".into()));
        }
        let defaults = SelfTrainingParams::default();
        let self_training = SelfTrainingParams {
            confidence_quantile: o.confidence_quantile.unwrap_or(defaults.confidence_quantile),
            max_rounds: o.max_rounds.unwrap_or(defaults.max_rounds),
        };
        self_training.validate().map_err(|e| Failure::BadArgs(e.to_string()))?;

        Ok(Self {
            experiment,
            method: method.into(),
            data,
            amount,
            sigma,
            pnn_bias: match o.pnn_bias {
                Some(b) => b.0,
                None => moons.then_some(MOONS_PNN_BIAS),
            },
            kernel,
            c: o.c.unwrap_or(1.0),
            gamma: o.gamma,
            tol: o.tol.unwrap_or(1e-3),
            max_iter: o.max_iter,
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            repeats: o.repeats.unwrap_or(if moons { MOONS_REPEATS } else { 1 }),
            self_training,
            out_dir: o.out_dir.unwrap_or_else(|| DEFAULT_OUT_DIR.into()),
            strict: o.strict,
        })
    }

    pub fn trial_seeds(&self) -> impl Iterator<Item = u64> + Clone {
        let seed = self.seed;
        (0..self.repeats as u64).map(move |i| seed.wrapping_add(i))
    }

    /// Pipeline configuration for one trial on `dim`-dimensional data.
    pub fn config(&self, dim: usize, seed: u64) -> PipelineConfig64 {
        let kernel = match self.kernel {
            KernelArg::Linear => KernelSpec64::Linear,
            KernelArg::Rbf => match self.gamma {
                Some(g) => KernelSpec64::rbf(g).expect("gamma validated positive"),
                None => KernelSpec64::default_rbf(dim),
            },
        };
        PipelineConfig64 {
            sigma: self.sigma.clone(),
            pnn_bias: self.pnn_bias,
            kernel,
            c: self.c,
            tol: self.tol,
            max_iter: self.max_iter,
            seed,
        }
    }

    /// Everything that determines the splits, for pairing runs.
    pub fn split_key(&self) -> (DataSpec, LabeledAmount, u64, usize) {
        (self.data.clone(), self.amount, self.seed, self.repeats)
    }
}

/// Samples loaded once per run; two-moons is generated per trial.
pub enum Dataset {
    TwoMoons {
        n_per_class: usize,
        noise: f64,
        test_per_class: usize,
    },
    Loaded {
        train: Vec<Sample64>,
        test: Vec<Sample64>,
    },
}

impl Dataset {
    pub fn load(spec: &DataSpec) -> Result<Self, Failure> {
        Ok(match spec {
            DataSpec::TwoMoons {
                n_per_class,
                noise,
                test_per_class,
            } => Dataset::TwoMoons {
                n_per_class: *n_per_class,
                noise: *noise,
                test_per_class: *test_per_class,
            },
            DataSpec::Usps {
                train,
                test,
                label_offset,
            } => {
                let (train, test) = load_usps(
                    train,
                    test,
                    UspsOptions {
                        label_offset: *label_offset,
                    },
                )
                .map_err(Failure::loading)?;
                Dataset::Loaded { train, test }
            }
            DataSpec::File { train, test } => {
                let train: Vec<Sample64> = read_samples(train, None).map_err(Failure::loading)?;
                let dim = train.first().map(|s| s.dim());
                let test = read_samples(test, dim).map_err(Failure::loading)?;
                Dataset::Loaded { train, test }
            }
        })
    }

    pub fn split(&self, amount: LabeledAmount, seed: u64) -> Result<SplitDataset64, Failure> {
        let (train, test) = match self {
            Dataset::TwoMoons {
                n_per_class,
                noise,
                test_per_class,
            } => (
                generate_two_moons(*n_per_class, *noise, seed).map_err(Failure::running)?,
                generate_two_moons(*test_per_class, *noise, two_moons_test_seed(seed)).map_err(Failure::running)?,
            ),
            Dataset::Loaded { train, test } => (train.clone(), test.clone()),
        };
        split_semi_supervised(train, test, amount, seed).map_err(Failure::running)
    }
}
