//! Semi-supervised classification with a Parzen probabilistic neural network
//! (PNN) as pseudo-labeller and a soft-margin kernel SVM as the final
//! classifier.
//!
//! The crate is organised bottom-up:
//!
//! * [`dataset`]: samples, the two-moons generator, USPS-style file loading
//!   and seeded labeled/unlabeled/test splitting.
//! * [`pnn`]: one-pass PNN training and Gaussian-window classification.
//! * [`svm`]: kernels, an SMO solver for the dual QP, binary and one-vs-all
//!   models, and a text model format.
//! * [`semisup`]: the PNN-Training pipeline, a self-training baseline, a
//!   supervised baseline and evaluation/reporting.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64`/`*32` aliases below fix the common instantiations.

pub mod dataset;
pub mod error;
pub mod pnn;
pub mod scalar;
pub mod semisup;
pub mod svm;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use dataset::{LabeledAmount, Sample, SplitDataset};
pub use pnn::{CategoryScores, PnnModel};
pub use semisup::{ExperimentReport, PipelineConfig, SelfTrainingParams, SigmaChoice};
pub use svm::{BinaryLabel, KernelSpec, MulticlassModel, SolverParams, SvmBinaryModel};

pub type Sample64 = Sample<f64>;
pub type Sample32 = Sample<f32>;
pub type SplitDataset64 = SplitDataset<f64>;
pub type SplitDataset32 = SplitDataset<f32>;
pub type PnnModel64 = PnnModel<f64>;
pub type PnnModel32 = PnnModel<f32>;
pub type KernelSpec64 = KernelSpec<f64>;
pub type KernelSpec32 = KernelSpec<f32>;
pub type SvmBinaryModel64 = SvmBinaryModel<f64>;
pub type SvmBinaryModel32 = SvmBinaryModel<f32>;
pub type MulticlassModel64 = MulticlassModel<f64>;
pub type MulticlassModel32 = MulticlassModel<f32>;
pub type PipelineConfig64 = PipelineConfig<f64>;
pub type PipelineConfig32 = PipelineConfig<f32>;
