use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero-norm feature vector{}", at_index(*.index))]
    ZeroVector { index: Option<usize> },

    #[error("dimension mismatch{}: expected {expected}, found {found}", at_index(*.index))]
    DimensionMismatch {
        expected: usize,
        found: usize,
        index: Option<usize>,
    },

    #[error("non-finite feature value{}", at_index(*.index))]
    NonFinite { index: Option<usize> },

    #[error("{}:{line}: {message}", .path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}:{line}: unknown label {label:?}", .path.display())]
    UnknownLabel {
        path: PathBuf,
        line: usize,
        label: String,
    },

    #[error("class {class}: requested {requested} labeled samples but only {available} available")]
    InsufficientSamples {
        class: usize,
        requested: usize,
        available: usize,
    },

    #[error("class {class} has no samples")]
    EmptyClass { class: usize },

    #[error("binary problem needs both labels, found only {0}")]
    SingleClass(&'static str),

    #[error("sample {index}: label {label} out of range for {num_classes} classes")]
    LabelOutOfRange {
        index: usize,
        label: usize,
        num_classes: usize,
    },

    #[error("sample {index} is missing its label")]
    MissingLabel { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("model format: {0}")]
    ModelFormat(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn at_index(index: Option<usize>) -> String {
    match index {
        Some(i) => format!(" at index {i}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn at(self, i: usize) -> Self {
        match self {
            Error::ZeroVector { .. } => Error::ZeroVector { index: Some(i) },
            Error::DimensionMismatch {
                expected, found, ..
            } => Error::DimensionMismatch {
                expected,
                found,
                index: Some(i),
            },
            Error::NonFinite { .. } => Error::NonFinite { index: Some(i) },
            other => other,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
