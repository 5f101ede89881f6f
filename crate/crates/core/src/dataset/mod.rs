//! Synthetic corpus: generators for non-packed surrogates, a toy packer with
//! three variants, manifest I/O, stratified splitting and random oversampling.

mod corpus;
mod generator;
mod manifest;
mod packer;
mod rle;
mod ros;
mod split;
mod tables;

pub use corpus::{build_corpus, CorpusConfig, MANIFEST_FILE, SAMPLES_DIR};
pub use generator::{generate_synthetic_binary, BinaryKind, MIN_SAMPLE_SIZE};
pub use manifest::{Label, Manifest, Sample, Split, MANIFEST_VERSION};
pub use packer::{toy_pack, toy_unpack, PackSpec, PackVariant, HEADER_LEN};
pub use rle::{rle_decode, rle_encode};
pub use ros::{balanced_train_ids, oversample_indices, random_oversample, BALANCED_TRAIN_FILE};
pub use split::{stratified_split, SplitFractions};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("sample size {0} is below the {MIN_SAMPLE_SIZE}-byte minimum")]
    SizeTooSmall(usize),
    #[error("empty payload")]
    EmptyPayload,
    #[error("corrupt packed data: {0}")]
    CorruptPacked(String),
    #[error("class {label} has {count} samples; at least 3 are required")]
    ClassTooSmall { label: u8, count: usize },
    #[error("oversampling needs both classes present")]
    SingleClassInput,
    #[error("invalid split fractions: {0}")]
    InvalidFractions(String),
    #[error("invalid corpus config: {0}")]
    InvalidConfig(String),
    #[error("invalid manifest: {0}")]
    InvalidManifest(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DatasetError>;
