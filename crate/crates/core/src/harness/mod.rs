//! Experiment runner: data loading, augmentation, library training and
//! batch evaluation.

mod augment;
mod config;
mod idx;
mod metrics;
mod run;

use thiserror::Error;

pub use augment::{affine, augment, AugmentConfig};
pub use config::{ConceptSpec, DataConfig, HarnessConfig};
pub use idx::{load_idx, parse_images, parse_labels, IdxDataset};
pub use metrics::{ClassMetrics, Confusion, Metrics};
pub use run::{
    concept_samples, evaluate, explanations_jsonl, test_slice, train_from_config, train_library, write_outputs,
    DatasetSlice, EvaluationResult, ImageResult, Outcome, Split, TrainingSummary,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("bad magic number: expected {expected:#010x}, found {found:#010x}")]
    BadMagic { expected: u32, found: u32 },
    #[error("file ends before the header says it should")]
    TruncatedFile,
    #[error("{images} images but {labels} labels")]
    CountMismatch { images: usize, labels: usize },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
    #[error("concept {label}: sample {index} is outside the {pool} training images of its class")]
    SampleOutOfRange { label: String, index: usize, pool: usize },
    #[error("concept {label}: {reason}")]
    GroupFailed { label: String, reason: String },
}
