//! Semi-supervised pipelines built from [`pnn`](crate::pnn) and [`svm`](crate::svm).

mod classifier;
mod config;
mod pipeline;
mod report;

pub use classifier::SvmClassifier;
pub use config::{PipelineConfig, SelfTrainingParams, SigmaChoice};
pub use pipeline::{
    pnn_training_pipeline, self_training_pipeline, supervised_svm_baseline, Method, PipelineRun,
};
pub use report::{evaluate, ConfigEcho, Counts, Diagnostics, ExperimentReport, SigmaEcho, SolverEcho};
