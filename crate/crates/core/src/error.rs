// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("cannot inject {mode} pattern: need {needed} eligible nodes, graph has {available}")]
    InsufficientNodes {
        mode: &'static str,
        needed: usize,
        available: usize,
    },

    #[error("smurf count {0} outside [2, 10]")]
    SmurfCount(usize),

    #[error("cannot stratify: class {class} has {count} member(s), need at least 2")]
    Stratify { class: bool, count: usize },

    #[error("training data must contain both classes")]
    SingleClass,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("column {column} missing on line {line} of {path}")]
    MissingColumn { path: PathBuf, line: u64, column: usize },

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
