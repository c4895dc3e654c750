use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid phone symbol {0:?}")]
    InvalidPhone(String),

    #[error("invalid sememe symbol {0:?}")]
    InvalidSememe(String),

    #[error("a lexicon entry needs at least one phone")]
    EmptyPhones,

    #[error("invalid cost weights: {0}")]
    InvalidWeights(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Stream(#[from] io::Error),

    #[error("unknown word {token:?} at token {position}")]
    UnknownWord { token: String, position: usize },

    #[error("instance too large for exhaustive search: more than {limit} search nodes")]
    InstanceTooLarge { limit: u64 },

    #[error("could not draw {wanted} distinct word forms after {attempts} attempts")]
    VocabularyCollision { wanted: usize, attempts: usize },

    #[error("utterance {utterance}: {message}")]
    EvalMismatch { utterance: usize, message: String },
}

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
