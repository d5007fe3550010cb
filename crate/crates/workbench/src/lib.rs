//! Synthetic workloads, dataset loading, experiment runs, reports and the
//! acceptance checks behind the `gmco` command line tool.

pub mod acceptance;
pub mod bench;
pub mod data;
pub mod eval;
pub mod experiment;
pub mod report;
pub mod synthetic;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum WorkbenchError {
    #[error(transparent)]
    Core(#[from] gmco_core::Error),
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("{0}")]
    Config(String),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
}

pub type Result<T> = std::result::Result<T, WorkbenchError>;

pub(crate) fn io_err(path: impl Into<PathBuf>, e: impl std::fmt::Display) -> WorkbenchError {
    WorkbenchError::Io {
        path: path.into(),
        msg: e.to_string(),
    }
}
