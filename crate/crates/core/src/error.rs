use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty corpus")]
    EmptyCorpus,

    #[error("no tokens in keyword {0:?}")]
    NoTokens(String),

    #[error("keyword {0:?} contains only form words")]
    OnlyFormWords(String),

    #[error("empty word")]
    EmptyWord,

    #[error("degree of contextuality must be non-negative, got {0}")]
    NegativeDegree(i64),

    #[error("lexicon conflict: {word:?} is listed as both {first} and {second}")]
    LexiconConflict {
        word: String,
        first: &'static str,
        second: &'static str,
    },

    #[error("unclassified words: {}", .0.join(", "))]
    Unclassified(Vec<String>),

    #[error("schema version mismatch: expected schema_version {expected}, found {found}")]
    SchemaVersion { expected: u32, found: String },

    #[error("parse error at byte offset {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}:{line}: {message}", .path.display())]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("provider {provider}: {message}")]
    Provider { provider: String, message: String },

    #[error("output directory {}: {message}", .path.display())]
    Output { path: PathBuf, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 for internal invariant violations, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}
