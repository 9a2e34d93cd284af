//! Social tagging (folksonomy) analysis toolkit.
//!
//! * [`store`]: indexed store of user/resource/tag-set bookmarks
//! * [`ingest`]: JSONL/TSV readers with automatic-tag stripping and availability counts
//! * [`stats`]: distinct-tag averages, rank-usage curves, r/u/b relations, tag novelty
//! * [`weighting`]: TF, TF-IRF, TF-IUF and TF-IBF resource vectors
//! * [`classifier`]: multiclass linear SVM and the repeated-subsampling accuracy grid
//! * [`simulator`]: synthetic folksonomies under different tag suggestion policies
//! * [`cli`]: the `folksonomy` command line
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod classifier;
pub mod cli;
pub mod error;
pub mod store;
pub mod ingest;
pub mod simulator;
pub mod stats;
pub mod weighting;

pub use classifier::{evaluate, train, AccuracyGrid, EvalConfig, Hyperparameters, LabeledSet, LinearModel};
pub use error::{Error, Result};
pub use store::{Bookmark, EntityKind, Folksonomy, ResourceId, TagFrequencies, TagId, UserId};
pub use ingest::{build_folksonomy, parse_stream, Format, IngestOptions, IngestReport, RawRecord};
pub use simulator::{describe, generate, Policy, SimConfig, Simulation};
pub use weighting::{inverse_frequency, vectorize, Scheme, Vectorizer, WeightedVector};
