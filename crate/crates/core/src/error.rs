use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-annotated bookmark (user {user:?}, resource {resource:?}): tag set is empty")]
    NonAnnotatedBookmark { user: String, resource: String },

    #[error("unknown tag id {0}")]
    UnknownTag(u32),

    #[error("unknown resource {0:?}")]
    UnknownResource(String),

    #[error("folksonomy is empty")]
    EmptyFolksonomy,

    #[error("bookmark order is not available; novelty cannot be computed on unordered data")]
    Unordered,

    #[error("inverse frequency undefined for n_tag = {n_tag}, n_total = {n_total}")]
    InverseFrequencyDomain { n_tag: u64, n_total: u64 },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("training set covers a single category ({0:?}); at least two are required")]
    SingleCategory(String),

    #[error("training size {size} must be smaller than the {labeled} labeled resources")]
    TrainingSizeTooLarge { size: usize, labeled: usize },

    #[error("vectors were built with mixed weighting schemes")]
    MixedSchemes,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {reason}")]
    Parse { path: String, line: u64, reason: String },

    #[error("unsupported cache format version {0}")]
    CacheVersion(u32),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
