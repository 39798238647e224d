use std::path::PathBuf;

use thiserror::Error;

use crate::dataset::UserId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("core user {0} has zero neighbors")]
    NoNeighbors(String),

    #[error("core user has zero likes: all core users dropped")]
    NoCoreUsers,

    #[error("unknown core user {0}")]
    UnknownUser(UserId),

    #[error("user {user} has {likes} likes; at least 2 are needed for a train/test split")]
    InsufficientLikes { user: UserId, likes: usize },

    #[error("no evaluable core users")]
    NoEvaluableUsers,

    #[error("no item is covered by any ego network")]
    NoCoveredItems,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
