use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};

use crate::exit::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    TwoMoons,
    Usps,
    CustomFile,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::TwoMoons => "two-moons",
            Experiment::Usps => "usps",
            Experiment::CustomFile => "custom-file",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    PnnTraining,
    SelfTraining,
    Supervised,
}

impl From<MethodArg> for pnn_training::semisup::Method {
    fn from(m: MethodArg) -> Self {
        use pnn_training::semisup::Method;
        match m {
            MethodArg::PnnTraining => Method::PnnTraining,
            MethodArg::SelfTraining => Method::SelfTraining,
            MethodArg::Supervised => Method::Supervised,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Rbf,
    Linear,
}

/// Optional PNN bias coordinate: a number, or `none` to disable it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bias(pub Option<f64>);

fn parse_bias(s: &str) -> Result<Bias, String> {
    if s.eq_ignore_ascii_case("none") {
        return Ok(Bias(None));
    }
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(|v| Bias(Some(v)))
        .ok_or_else(|| format!("expected a number or `none`, got {s:?}"))
}

fn parse_unit(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v <= 1.0 => Ok(v),
        _ => Err(format!("expected a number in (0, 1], got {s:?}")),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a non-negative number, got {s:?}")),
    }
}

fn parse_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("expected an integer >= 1, got {s:?}")),
    }
}

/// Everything a run can be configured with. Every field is optional so that
/// command-line values can be layered over spec-file values over defaults.
#[derive(Clone, Debug, Default, Args)]
pub struct Options {
    /// Samples per class generated for two-moons.
    #[arg(long, value_parser = parse_count)]
    pub n_per_class: Option<usize>,
    /// Labeled samples kept per class.
    #[arg(long, value_parser = parse_count, conflicts_with = "labeled_fraction")]
    pub labeled_per_class: Option<usize>,
    /// Fraction of the training set kept labeled (stratified).
    #[arg(long, value_parser = parse_unit)]
    pub labeled_fraction: Option<f64>,
    /// Standard deviation of the two-moons noise.
    #[arg(long, value_parser = parse_non_negative)]
    pub noise: Option<f64>,
    /// Samples per class in the two-moons test draw.
    #[arg(long, value_parser = parse_count)]
    pub test_per_class: Option<usize>,
    /// Fixed PNN window width.
    #[arg(long, value_parser = parse_positive, conflicts_with = "sigma_grid")]
    pub sigma: Option<f64>,
    /// Comma-separated grid searched by leave-one-out on the labeled set.
    #[arg(long, value_delimiter = ',', value_parser = parse_positive)]
    pub sigma_grid: Option<Vec<f64>>,
    /// Constant coordinate appended to PNN inputs, or `none`.
    #[arg(long, value_parser = parse_bias)]
    pub pnn_bias: Option<Bias>,
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// SVM penalty.
    #[arg(long, value_parser = parse_positive)]
    pub c: Option<f64>,
    /// RBF width; defaults to 1/d.
    #[arg(long, value_parser = parse_positive)]
    pub gamma: Option<f64>,
    /// SMO stopping tolerance on the maximal KKT violation.
    #[arg(long, value_parser = parse_positive)]
    pub tol: Option<f64>,
    #[arg(long, value_parser = parse_count)]
    pub max_iter: Option<usize>,
    /// Seed of the first trial; trial i uses seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = parse_count)]
    pub repeats: Option<usize>,
    /// Training file (usps, custom-file).
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Test file (usps, custom-file).
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Subtracted from every label read from a USPS file.
    #[arg(long)]
    pub label_offset: Option<usize>,
    /// Self-training: fraction of the remaining pool moved per round.
    #[arg(long, value_parser = parse_unit)]
    pub confidence_quantile: Option<f64>,
    #[arg(long, value_parser = parse_count)]
    pub max_rounds: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Fail with exit code 4 if any SVM solve hits its iteration limit.
    #[arg(long)]
    pub strict: bool,
}

impl Options {
    /// Fills every unset field of `self` from `lower`.
    pub fn or(self, lower: Options) -> Options {
        Options {
            n_per_class: self.n_per_class.or(lower.n_per_class),
            labeled_per_class: self
                .labeled_per_class
                .or(if self.labeled_fraction.is_some() { None } else { lower.labeled_per_class }),
            labeled_fraction: self
                .labeled_fraction
                .or(if self.labeled_per_class.is_some() { None } else { lower.labeled_fraction }),
            noise: self.noise.or(lower.noise),
            test_per_class: self.test_per_class.or(lower.test_per_class),
            sigma: self.sigma.or(if self.sigma_grid.is_some() { None } else { lower.sigma }),
            sigma_grid: self.sigma_grid.or(if self.sigma.is_some() { None } else { lower.sigma_grid }),
            pnn_bias: self.pnn_bias.or(lower.pnn_bias),
            kernel: self.kernel.or(lower.kernel),
            c: self.c.or(lower.c),
            gamma: self.gamma.or(lower.gamma),
            tol: self.tol.or(lower.tol),
            max_iter: self.max_iter.or(lower.max_iter),
            seed: self.seed.or(lower.seed),
            repeats: self.repeats.or(lower.repeats),
            train: self.train.or(lower.train),
            test: self.test.or(lower.test),
            label_offset: self.label_offset.or(lower.label_offset),
            confidence_quantile: self.confidence_quantile.or(lower.confidence_quantile),
            max_rounds: self.max_rounds.or(lower.max_rounds),
            out_dir: self.out_dir.or(lower.out_dir),
            strict: self.strict || lower.strict,
        }
    }
}

/// `pnn-train <experiment> <method> [options]`
#[derive(Debug, Parser)]
#[command(name = "pnn-train", version, about = "PNN-Training semi-supervised experiments")]
pub struct RunCli {
    pub experiment: Option<Experiment>,
    pub method: Option<MethodArg>,
    /// key=value file; command-line flags take precedence over it.
    #[arg(long)]
    pub spec_file: Option<PathBuf>,
    #[command(flatten)]
    pub options: Options,
}

/// `pnn-train compare <experiment> <method>... [options]` or
/// `pnn-train compare --spec-file a --spec-file b [options]`
#[derive(Debug, Parser)]
#[command(name = "pnn-train compare", version, about = "Paired comparison of methods on identical splits")]
pub struct CompareCli {
    pub experiment: Option<Experiment>,
    pub methods: Vec<MethodArg>,
    /// One run spec per file; repeat for several methods.
    #[arg(long)]
    pub spec_file: Vec<PathBuf>,
    #[command(flatten)]
    pub options: Options,
}

/// A spec file: `experiment`, `method` and every long option name, one
/// `key = value` per line. `#` starts a comment.
#[derive(Debug, Parser)]
#[command(name = "spec-file", no_binary_name = true)]
struct FileSpec {
    #[arg(long)]
    experiment: Option<Experiment>,
    #[arg(long)]
    method: Option<MethodArg>,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug)]
pub struct SpecFile {
    pub experiment: Option<Experiment>,
    pub method: Option<MethodArg>,
    pub options: Options,
}

pub fn read_spec_file(path: &Path) -> Result<SpecFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::DataIo(format!("cannot read spec file {}: {e}", path.display())))?;
    parse_spec_text(&text).map_err(|e| Failure::BadArgs(format!("{}: {e}", path.display())))
}

pub fn parse_spec_text(text: &str) -> Result<SpecFile, String> {
    let mut argv = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value, got {line:?}", n + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "strict" {
            match value {
                "true" => argv.push("--strict".to_string()),
                "false" => {}
                _ => return Err(format!("line {}: strict must be true or false", n + 1)),
            }
            continue;
        }
        argv.push(format!("--{key}={value}"));
    }
    let spec = FileSpec::try_parse_from(argv).map_err(|e| e.render().to_string().trim().to_string())?;
    Ok(SpecFile {
        experiment: spec.experiment,
        method: spec.method,
        options: spec.options,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_text_maps_onto_options() {
        let s = parse_spec_text(
            "# two-moons run\nexperiment = two-moons\nmethod=pnn-training\nn_per_class = 40\nsigma-grid=0.5,1\npnn-bias=none\nstrict=true\n",
        )
        .unwrap();
        assert_eq!(s.experiment, Some(Experiment::TwoMoons));
        assert_eq!(s.method, Some(MethodArg::PnnTraining));
        assert_eq!(s.options.n_per_class, Some(40));
        assert_eq!(s.options.sigma_grid, Some(vec![0.5, 1.0]));
        assert_eq!(s.options.pnn_bias, Some(Bias(None)));
        assert!(s.options.strict);
    }

    #[test]
    fn bad_spec_lines_are_reported() {
        assert!(parse_spec_text("n-per-class 40").unwrap_err().contains("line 1"));
        assert!(parse_spec_text("no-such-key=1").is_err());
        assert!(parse_spec_text("c=-1").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let file = parse_spec_text("c=10\nseed=3\nsigma=0.5\nlabeled-fraction=0.2").unwrap().options;
        let cli = Options {
            c: Some(2.0),
            sigma_grid: Some(vec![1.0]),
            labeled_per_class: Some(4),
            ..Options::default()
        };
        let merged = cli.or(file);
        assert_eq!(merged.c, Some(2.0));
        assert_eq!(merged.seed, Some(3));
        assert_eq!(merged.sigma, None);
        assert_eq!(merged.sigma_grid, Some(vec![1.0]));
        assert_eq!(merged.labeled_fraction, None);
        assert_eq!(merged.labeled_per_class, Some(4));
    }
}
