use std::fmt;

/// A failed invocation and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Exit code 2.
    BadArgs(String),
    /// Exit code 3.
    DataIo(String),
    /// Exit code 4; only raised with `--strict`.
    NonConvergence(String),
    /// Exit code 1.
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::BadArgs(_) => 2,
            Failure::DataIo(_) => 3,
            Failure::NonConvergence(_) => 4,
        }
    }

    /// Classifies an error raised while reading dataset files.
    pub fn loading(e: pnn_training::Error) -> Self {
        Failure::DataIo(e.to_string())
    }

    /// Classifies an error raised while running a trial.
    pub fn running(e: pnn_training::Error) -> Self {
        use pnn_training::Error as E;
        match e {
            E::Io { .. } => Failure::DataIo(e.to_string()),
            E::InsufficientSamples { .. }
            | E::EmptyClass { .. }
            | E::SingleClass(_)
            | E::InvalidParameter(_)
            | E::LabelOutOfRange { .. } => Failure::BadArgs(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }

    pub fn write(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure::Internal(format!("cannot write {}: {e}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::BadArgs(m) | Failure::DataIo(m) | Failure::NonConvergence(m) | Failure::Internal(m) => {
                f.write_str(m)
            }
        }
    }
}
