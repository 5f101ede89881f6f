//! Byte plots: raw file bytes laid out row-major as an 8-bit grayscale grid.
//!
//! Byte plots are already single-channel, so no grayscale conversion step
//! exists anywhere in the pipeline.

mod entropy;
mod png_io;
mod resize;

pub use entropy::shannon_entropy;
pub use png_io::{export_png, import_png};
pub use resize::{resize_image, ResizeMethod};

use std::fmt;
use std::str::FromStr;

/// Largest input accepted by [`bytes_to_image`].
pub const MAX_INPUT_LEN: usize = 256 * 1024 * 1024;

#[derive(Debug, thiserror::Error)]
pub enum ByteplotError {
    #[error("empty input")]
    EmptyInput,
    #[error("input of {0} bytes exceeds the {MAX_INPUT_LEN}-byte limit")]
    InputTooLarge(usize),
    #[error("invalid dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },
    #[error("fixed width must be at least 1")]
    ZeroWidth,
    #[error("unsupported image format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ByteplotError>;

/// A row-major grid of 8-bit intensities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ByteImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
    source_len: usize,
}

impl ByteImage {
    /// Wraps an existing raster. `source_len` is set to the pixel count.
    pub fn from_raw(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(ByteplotError::InvalidDimensions { width, height });
        }
        let source_len = pixels.len();
        Ok(Self { width, height, pixels, source_len })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::from_raw(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Byte count of the originating file, before padding.
    pub fn source_len(&self) -> usize {
        self.source_len
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// The original bytes (padding excluded).
    pub fn source_bytes(&self) -> &[u8] {
        &self.pixels[..self.source_len]
    }

    pub fn transpose(&self) -> ByteImage {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for x in 0..self.width {
            for y in 0..self.height {
                pixels.push(self.get(x, y));
            }
        }
        ByteImage { width: self.height, height: self.width, pixels, source_len: self.width * self.height }
    }
}

/// How the byte-plot width is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthPolicy {
    Fixed(usize),
    #[default]
    Adaptive,
}

/// `(exclusive upper bound on file size, width)`; files of 1 MiB and more get 1024.
const ADAPTIVE_WIDTHS: [(usize, usize); 7] = [
    (10 * 1024, 32),
    (30 * 1024, 64),
    (60 * 1024, 128),
    (100 * 1024, 256),
    (200 * 1024, 384),
    (500 * 1024, 512),
    (1024 * 1024, 768),
];

/// Width the adaptive table assigns to a file of `len` bytes.
pub fn adaptive_width(len: usize) -> usize {
    ADAPTIVE_WIDTHS.iter().find(|(limit, _)| len < *limit).map_or(1024, |&(_, w)| w)
}

impl WidthPolicy {
    pub fn width_for(&self, len: usize) -> Result<usize> {
        match *self {
            WidthPolicy::Fixed(0) => Err(ByteplotError::ZeroWidth),
            WidthPolicy::Fixed(w) => Ok(w),
            WidthPolicy::Adaptive => Ok(adaptive_width(len)),
        }
    }
}

impl fmt::Display for WidthPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WidthPolicy::Fixed(w) => write!(f, "fixed:{w}"),
            WidthPolicy::Adaptive => f.write_str("adaptive"),
        }
    }
}

impl FromStr for WidthPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "adaptive" {
            return Ok(WidthPolicy::Adaptive);
        }
        let n = s.strip_prefix("fixed:").ok_or_else(|| format!("expected `adaptive` or `fixed:N`, got `{s}`"))?;
        match n.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("invalid fixed width `{n}`")),
            Ok(w) => Ok(WidthPolicy::Fixed(w)),
        }
    }
}

/// Lays `bytes` out left to right, top to bottom, zero-padding the final row.
pub fn bytes_to_image(bytes: &[u8], policy: WidthPolicy) -> Result<ByteImage> {
    if bytes.is_empty() {
        return Err(ByteplotError::EmptyInput);
    }
    if bytes.len() > MAX_INPUT_LEN {
        return Err(ByteplotError::InputTooLarge(bytes.len()));
    }
    let width = policy.width_for(bytes.len())?;
    let height = bytes.len().div_ceil(width);
    let mut pixels = Vec::with_capacity(width * height);
    pixels.extend_from_slice(bytes);
    pixels.resize(width * height, 0);
    Ok(ByteImage { width, height, pixels, source_len: bytes.len() })
}
