use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid JSON in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("duplicate article_id `{0}`")]
    DuplicateArticle(String),

    #[error("frame `{0}` does not occur in the annotation store")]
    FrameAbsent(String),

    #[error("frame set `{0}` has no members")]
    EmptyFrameSet(String),

    #[error("frame set `{name}`: {reason}")]
    FrameSet { name: String, reason: String },

    #[error("empty sampling population for frame set `{frameset}` in period {period}")]
    EmptyPopulation { frameset: String, period: String },

    #[error("schema mismatch: `{0}` vs `{1}`")]
    SchemaMismatch(String, String),

    #[error("sample mismatch: `{0}` vs `{1}`")]
    SampleMismatch(String, String),

    #[error("agreement is undefined: no items were labeled by both annotators")]
    NoJointLabels,

    #[error("unknown {kind} `{id}`")]
    Unknown { kind: &'static str, id: String },

    #[error("{kind} `{id}` already exists")]
    Exists { kind: &'static str, id: String },

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("missing report input: {0}")]
    MissingInput(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn unknown(kind: &'static str, id: impl Into<String>) -> Self {
        Error::Unknown {
            kind,
            id: id.into(),
        }
    }
}
