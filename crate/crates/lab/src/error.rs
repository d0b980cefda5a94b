use std::path::PathBuf;

use fowt_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: checksum mismatch (file truncated or modified)")]
    Checksum { path: PathBuf },
    #[error("{path}: format version {found}, expected {expected}")]
    Version { path: PathBuf, found: String, expected: String },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Analysis(String),
}

/// Error classes with distinct process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Config,
    Runtime,
    Io,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        match self {
            ExitClass::Config => 2,
            ExitClass::Runtime => 3,
            ExitClass::Io => 4,
        }
    }
}

impl LabError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }

    pub fn format(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        LabError::Format { path: path.into(), msg: msg.into() }
    }

    pub fn class(&self) -> ExitClass {
        match self {
            LabError::Core(e) => match e {
                CoreError::MissingKey(_)
                | CoreError::UnknownKey(_)
                | CoreError::DuplicateKey(_)
                | CoreError::Syntax { .. }
                | CoreError::BadValue { .. }
                | CoreError::Invalid(_)
                | CoreError::Surface(_)
                | CoreError::Spec(_) => ExitClass::Config,
                _ => ExitClass::Runtime,
            },
            LabError::Usage(_) => ExitClass::Config,
            LabError::Analysis(_) => ExitClass::Runtime,
            LabError::Io { .. } | LabError::Checksum { .. } | LabError::Version { .. } | LabError::Format { .. } => {
                ExitClass::Io
            }
        }
    }
}
