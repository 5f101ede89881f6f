//! Packed-executable detection from byte-plot images.
//!
//! Pipeline: raw bytes → [`byteplot`] image → [`gabor`] jet (24 texture
//! statistics) → one of the [`classifiers`] → [`eval`] metrics. The
//! [`dataset`] module provides a deterministic synthetic corpus with a toy
//! packer whose third variant is reserved for an unknown-packer holdout test.

pub mod byteplot;
pub mod classifiers;
pub mod cli;
pub mod dataset;
pub mod eval;
pub mod fsutil;
pub mod gabor;
pub mod rng;
