use thiserror::Error;

/// Errors produced by corpus handling, training, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate instance id `{id}`")]
    DuplicateId { line: usize, id: String },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("sense `{sense}` has {available} instances, need {needed}")]
    InsufficientSense {
        sense: String,
        available: usize,
        needed: usize,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("{0} is not a legal window size (legal: 0 1 2 3 4 5 10 25 50)")]
    InvalidWindowSize(usize),

    #[error("unknown sense `{0}`")]
    UnknownSense(String),

    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    InvalidEpsilon(f64),

    #[error("model file declares unsupported version `{0}`")]
    ModelVersion(String),

    #[error("model file truncated: {0}")]
    ModelTruncated(String),

    #[error("model checksum mismatch: stored {stored}, computed {computed}")]
    ModelChecksum { stored: String, computed: String },

    #[error("malformed model file: {0}")]
    ModelFormat(String),

    #[error("train and held-out splits share instance id `{0}`")]
    SplitContamination(String),

    #[error("classifier grid is incomplete: {0}")]
    IncompleteGrid(String),

    #[error("unknown vote rule `{0}` (expected majority, weighted, all81, or category=<left>,<right>)")]
    UnknownVoteRule(String),

    #[error("malformed ensemble manifest: {0}")]
    Manifest(String),

    #[error("prediction and gold sequences differ in length ({predicted} vs {gold})")]
    LengthMismatch { predicted: usize, gold: usize },

    #[error("sequences must be non-empty")]
    EmptySequence,

    #[error("corpus has {instances} instances; k={k} folds need at least {}", 2 * k)]
    TooFewInstances { instances: usize, k: usize },

    #[error("fold count must be at least 2, got {0}")]
    InvalidFoldCount(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
