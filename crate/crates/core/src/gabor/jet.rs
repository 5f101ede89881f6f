use std::path::Path;

use rayon::prelude::*;

use super::{convolve2d, FeatureTable, GaborBank, GaborError, Kernel, Result};
use crate::byteplot::{bytes_to_image, resize_image, ByteImage, ResizeMethod, WidthPolicy};
use crate::dataset::Manifest;

/// Side length images are resized to before filtering.
pub const JET_INPUT_SIZE: usize = 64;

/// Concatenated `[mean, variance]` pairs, frequency-major then orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn means(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().step_by(2).copied()
    }

    pub fn variances(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().skip(1).step_by(2).copied()
    }
}

fn jet_with_kernels(img: &ByteImage, kernels: &[Kernel]) -> Result<FeatureVector> {
    let resized = resize_image(img, JET_INPUT_SIZE, JET_INPUT_SIZE, ResizeMethod::Bilinear)?;
    let mut values = Vec::with_capacity(kernels.len() * 2);
    for k in kernels {
        let (mean, var) = convolve2d(&resized, k).mean_variance();
        values.push(mean);
        values.push(var);
    }
    Ok(FeatureVector(values))
}

/// Resizes `img` to 64x64 and records response mean and variance for every
/// kernel in the bank.
pub fn extract_gabor_jet(img: &ByteImage, bank: &GaborBank) -> Result<FeatureVector> {
    jet_with_kernels(img, &bank.kernels()?)
}

/// Bytes -> byte plot -> jet.
pub fn jet_from_bytes(bytes: &[u8], policy: WidthPolicy, bank: &GaborBank) -> Result<FeatureVector> {
    let img = bytes_to_image(bytes, policy)?;
    extract_gabor_jet(&img, bank)
}

#[derive(Debug)]
pub struct BatchOutput {
    /// Successful rows, in manifest order.
    pub table: FeatureTable,
    /// `(sample id, error message)` for every sample that could not be processed.
    pub failures: Vec<(String, String)>,
}

/// Extracts a jet for every manifest sample, resolving paths against `root`.
///
/// Samples are processed in parallel; rows keep manifest order. Per-sample
/// failures are collected and the call only fails if every sample failed.
pub fn extract_batch(manifest: &Manifest, root: &Path, bank: &GaborBank, policy: WidthPolicy) -> Result<BatchOutput> {
    let kernels = bank.kernels()?;
    let results: Vec<_> = manifest
        .samples
        .par_iter()
        .map(|s| {
            let jet = std::fs::read(root.join(&s.path))
                .map_err(GaborError::from)
                .and_then(|bytes| Ok(bytes_to_image(&bytes, policy)?))
                .and_then(|img| jet_with_kernels(&img, &kernels));
            (s.id.clone(), jet)
        })
        .collect();

    let mut table = FeatureTable::new(bank.feature_len());
    let mut failures = Vec::new();
    for (id, r) in results {
        match r {
            Ok(v) => table.push(id, v.values())?,
            Err(e) => failures.push((id, e.to_string())),
        }
    }
    if table.is_empty() && !failures.is_empty() {
        return Err(GaborError::AllSamplesFailed(failures.len()));
    }
    Ok(BatchOutput { table, failures })
}
