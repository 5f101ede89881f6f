//! Gabor filter bank and the mean/variance "jet" descriptor.
//!
//! Each byte plot is resized to 64x64 (bilinear), convolved with every kernel
//! in the bank, and summarised by the population mean and variance of each
//! response map. The default bank (3 frequencies x 4 orientations) yields
//! 24 values.

mod convolve;
mod jet;
mod kernel;
mod table;

pub use convolve::{convolve2d, convolve_plane, ResponseMap};
pub use jet::{extract_batch, extract_gabor_jet, jet_from_bytes, BatchOutput, FeatureVector, JET_INPUT_SIZE};
pub use kernel::{make_gabor_kernel, GaborBank, GaborParams, Kernel};
pub use table::{read_features, FeatureTable, ARCHIVE_MAGIC, ARCHIVE_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum GaborError {
    #[error("invalid Gabor parameters: {0}")]
    InvalidParams(String),
    #[error("every sample in the batch failed ({0} failures)")]
    AllSamplesFailed(usize),
    #[error("malformed feature file: {0}")]
    Format(String),
    #[error(transparent)]
    Byteplot(#[from] crate::byteplot::ByteplotError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GaborError>;
