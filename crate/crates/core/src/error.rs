use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("no path from `{from}` to `{to}`")]
    NoPath { from: String, to: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{}: parse error at line {line}, column {column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("episode `{episode}` references unknown viewpoint `{viewpoint}`")]
    ReferentialIntegrity { episode: String, viewpoint: String },

    #[error("{capability}: unusable provider response: {detail}")]
    ProviderFormat {
        capability: &'static str,
        detail: String,
    },

    #[error("transport: {0}")]
    Transport(String),

    #[error("grounding cell (landmark {row}, panorama {col}): {source}")]
    Grounding {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no candidate hypotheses to rank")]
    NoCandidates,

    #[error("world generation: {0}")]
    Generation(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, err: &serde_json::Error) -> Self {
        Error::Parse {
            path: path.into(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

/// Reads a file and decodes it as JSON, reporting decode failures with line/column context.
pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path, &e))
}
