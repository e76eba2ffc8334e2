use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("missing array \"{array}\" on mesh \"{mesh}\"")]
    MissingArray { mesh: String, array: String },

    #[error("field \"{0}\" already exists on the mesh")]
    NameCollision(String),

    #[error("kind error: {0}")]
    Kind(String),

    #[error("rank {rank} out of range for {ranks} ranks")]
    Rank { rank: usize, ranks: usize },

    #[error("non-finite value in field \"{0}\"")]
    NonFinite(String),

    #[error("rank {0} aborted because a peer rank failed")]
    Aborted(usize),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("xml parse error at {line}:{column}: {message}")]
    Parse {
        line: u32,
        column: u32,
        message: String,
    },

    #[error("image format error: {0}")]
    Format(String),

    #[error("cannot access {}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("stage {index} ({kind}) failed: {source}")]
    Stage {
        index: usize,
        kind: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }

    /// Innermost error, looking through stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}
