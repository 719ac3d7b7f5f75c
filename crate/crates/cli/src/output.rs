use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use pnn_training::semisup::{Method, PipelineRun};
use pnn_training::{ExperimentReport, SplitDataset64};

use crate::exit::Failure;
use crate::options::Experiment;

/// Grid points per axis in the plot data.
pub const GRID_SIZE: usize = 200;
/// Margin added on every side of the data bounding box, as a fraction of its extent.
pub const GRID_MARGIN: f64 = 0.10;

/// One finished trial.
pub struct Trial {
    pub seed: u64,
    pub split: SplitDataset64,
    pub run: PipelineRun<f64>,
}

pub fn display_name(method: Method) -> &'static str {
    match method {
        Method::PnnTraining => "PNN-Training",
        Method::SelfTraining => "Self-Training",
        Method::Supervised => "Supervised SVM",
    }
}

/// Published test errors for the methods this tool computes.
pub fn published(experiment: Experiment, method: Method) -> Option<f64> {
    match (experiment, method) {
        (Experiment::TwoMoons, Method::PnnTraining) => Some(10.23),
        (Experiment::TwoMoons, Method::SelfTraining) => Some(33.68),
        (Experiment::Usps, Method::PnnTraining) => Some(7.42),
        (Experiment::Usps, Method::SelfTraining) => Some(8.22),
        _ => None,
    }
}

/// Published rows for methods that are not recomputed.
pub fn reference_rows(experiment: Experiment) -> &'static [(&'static str, f64)] {
    match experiment {
        Experiment::TwoMoons => &[
            ("Branch and Bound", 0.0),
            ("Self-Training", 33.68),
            ("Help-Training", 15.07),
            ("PNN-Training", 10.23),
        ],
        Experiment::Usps => &[
            ("TSVM/SVMLight", 14.70),
            ("Self-Training", 8.22),
            ("Help-Training", 7.77),
            ("PNN-Training", 7.42),
        ],
        Experiment::CustomFile => &[],
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub trials: usize,
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator); zero for one trial.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(errors: &[f64]) -> Self {
        let n = errors.len();
        let mean = errors.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            trials: n,
            mean,
            std: var.sqrt(),
            min: errors.iter().cloned().fold(f64::INFINITY, f64::min),
            max: errors.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

pub fn stem(experiment: Experiment, method: Method) -> String {
    format!("{}-{}", experiment.name(), method.name())
}

fn write(path: PathBuf, body: &str) -> Result<(), Failure> {
    fs::write(&path, body).map_err(|e| Failure::write(&path, e))
}

/// Writes per-trial reports, plot data for 2-D trials, the trial table and
/// the summary row. Returns the summary.
pub fn write_method(
    dir: &Path,
    experiment: Experiment,
    method: Method,
    trials: &[Trial],
) -> Result<Summary, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::write(dir, e))?;
    let stem = stem(experiment, method);
    let mut table = String::from(ExperimentReport::csv_header());
    table.push('\n');
    for t in trials {
        write(dir.join(format!("{stem}-seed{}.json", t.seed)), &t.run.report.to_text())?;
        if t.split.dim() == 2 {
            write(dir.join(format!("{stem}-seed{}-plot.csv", t.seed)), &plot_csv(t)?)?;
        }
        table.push_str(&t.run.report.to_csv_row());
        table.push('\n');
    }
    write(dir.join(format!("{stem}-trials.csv")), &table)?;

    let errors: Vec<f64> = trials.iter().map(|t| t.run.report.test_error_percent).collect();
    let s = Summary::of(&errors);
    let reference = published(experiment, method).map_or_else(String::new, |v| v.to_string());
    write(
        dir.join(format!("{stem}-summary.csv")),
        &format!(
            "experiment,method,trials,mean_error_percent,std_error_percent,min_error_percent,max_error_percent,published_error_percent\n{},{},{},{},{},{},{},{}\n",
            experiment.name(),
            method.name(),
            s.trials,
            s.mean,
            s.std,
            s.min,
            s.max,
            reference
        ),
    )?;
    Ok(s)
}

pub fn summary_line(experiment: Experiment, method: Method, s: &Summary) -> String {
    let mut line = format!(
        "{} {}: mean test error {:.2}% (std {:.2}, min {:.2}, max {:.2}) over {} trial{}",
        experiment.name(),
        method.name(),
        s.mean,
        s.std,
        s.min,
        s.max,
        s.trials,
        if s.trials == 1 { "" } else { "s" }
    );
    if let Some(p) = published(experiment, method) {
        let _ = write!(line, "; published {p:.2}%");
    }
    line
}

/// `x,y,true_label,pseudo_label,split,decision_value` for every sample, then a
/// `GRID_SIZE`×`GRID_SIZE` grid over the padded bounding box.
pub fn plot_csv(t: &Trial) -> Result<String, Failure> {
    let classifier = &t.run.classifier;
    let f = |x: &[f64]| classifier.decision_value(x).map_err(Failure::running);
    let mut out = String::from("x,y,true_label,pseudo_label,split,decision_value\n");
    let mut row = |x: &[f64], truth: Option<usize>, pseudo: Option<usize>, split: &str| -> Result<(), Failure> {
        let opt = |v: Option<usize>| v.map_or_else(String::new, |v| v.to_string());
        let _ = writeln!(out, "{},{},{},{},{},{}", x[0], x[1], opt(truth), opt(pseudo), split, f(x)?);
        Ok(())
    };
    let s = &t.split;
    for p in s.labeled() {
        row(&p.features, p.label, None, "labeled")?;
    }
    for ((p, truth), pseudo) in s.unlabeled().iter().zip(s.unlabeled_ground_truth()).zip(&t.run.pseudo_labels) {
        row(&p.features, Some(*truth), *pseudo, "unlabeled")?;
    }
    for p in s.test() {
        row(&p.features, p.label, None, "test")?;
    }

    let all = s.labeled().iter().chain(s.unlabeled()).chain(s.test());
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        for k in 0..2 {
            lo[k] = lo[k].min(p.features[k]);
            hi[k] = hi[k].max(p.features[k]);
        }
    }
    for k in 0..2 {
        let pad = GRID_MARGIN * (hi[k] - lo[k]).max(f64::EPSILON);
        lo[k] -= pad;
        hi[k] += pad;
    }
    let at = |k: usize, i: usize| lo[k] + (hi[k] - lo[k]) * i as f64 / (GRID_SIZE - 1) as f64;
    for i in 0..GRID_SIZE {
        for j in 0..GRID_SIZE {
            row(&[at(0, i), at(1, j)], None, None, "grid")?;
        }
    }
    Ok(out)
}
