use std::path::PathBuf;

use thiserror::Error;

use hrg::analysis::AnalysisError;
use hrg::graph::GraphError;
use hrg::theory::TheoryError;
use hrg::validate::ValidationError;
use hrg::ModelError;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid model parameters: {0}")]
    Model(#[from] ModelError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("{failed} validation check(s) failed")]
    ChecksFailed { failed: usize },
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Format { path: PathBuf, line: usize, message: String },
    #[error("{path}: {source}")]
    Graph {
        path: PathBuf,
        #[source]
        source: GraphError,
    },
}

impl CliError {
    /// 1 usage, 2 validation failure, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Model(_)
            | CliError::Theory(_)
            | CliError::Analysis(_)
            | CliError::Config { .. } => 1,
            CliError::Validation(_) | CliError::ChecksFailed { .. } => 2,
            CliError::Io { .. } | CliError::Format { .. } | CliError::Graph { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
