use std::fmt;
use std::str::FromStr;

use super::tables::{CODE_WEIGHTS, TABLE_TOTAL, TEXT_WEIGHTS};
use super::{DatasetError, Result};
use crate::rng::XorShift64Star;

pub const MIN_SAMPLE_SIZE: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryKind {
    CodeLike,
    TextLike,
    Mixed,
    Sparse,
}

impl BinaryKind {
    pub const ALL: [BinaryKind; 4] =
        [BinaryKind::CodeLike, BinaryKind::TextLike, BinaryKind::Mixed, BinaryKind::Sparse];

    /// Manifest variant tag for an unpacked sample of this kind.
    pub fn variant_tag(self) -> &'static str {
        match self {
            BinaryKind::CodeLike => "raw-code",
            BinaryKind::TextLike => "raw-text",
            BinaryKind::Mixed => "raw-mixed",
            BinaryKind::Sparse => "raw-sparse",
        }
    }
}

impl fmt::Display for BinaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinaryKind::CodeLike => "code",
            BinaryKind::TextLike => "text",
            BinaryKind::Mixed => "mixed",
            BinaryKind::Sparse => "sparse",
        })
    }
}

impl FromStr for BinaryKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "code" => Ok(BinaryKind::CodeLike),
            "text" => Ok(BinaryKind::TextLike),
            "mixed" => Ok(BinaryKind::Mixed),
            "sparse" => Ok(BinaryKind::Sparse),
            _ => Err(format!("unknown binary kind `{s}`")),
        }
    }
}

/// Inverse-CDF sampler over a pinned 256-entry weight table.
struct ByteSampler {
    cumulative: [u32; 256],
}

impl ByteSampler {
    fn new(weights: &[u32; 256]) -> Self {
        let mut cumulative = [0u32; 256];
        let mut acc = 0u32;
        for (c, w) in cumulative.iter_mut().zip(weights) {
            acc += w;
            *c = acc;
        }
        debug_assert_eq!(acc, TABLE_TOTAL);
        Self { cumulative }
    }

    #[inline]
    fn sample(&self, rng: &mut XorShift64Star) -> u8 {
        let r = rng.below(TABLE_TOTAL as u64) as u32;
        self.cumulative.partition_point(|&c| c <= r) as u8
    }

    fn fill(&self, rng: &mut XorShift64Star, out: &mut Vec<u8>, n: usize) {
        out.extend((0..n).map(|_| self.sample(rng)));
    }
}

const SECTION_LABELS: [&[u8; 8]; 3] = [b".text\0\0\0", b".rdata\0\0", b".data\0\0\0"];

/// Deterministic non-packed surrogate of `size` bytes.
///
/// * `CodeLike`: i.i.d. draws from the pinned code table.
/// * `TextLike`: i.i.d. draws from the text table (bytes `0x09..=0x7E`).
/// * `Mixed`: `.text` (code, 1/2), `.rdata` (text, 1/4) and `.data` (sparse,
///   rest) sections, each led by an 8-byte label.
/// * `Sparse`: zero runs of 16..512 bytes alternating with code runs of 16..256.
pub fn generate_synthetic_binary(kind: BinaryKind, size: usize, seed: u64) -> Result<Vec<u8>> {
    if size < MIN_SAMPLE_SIZE {
        return Err(DatasetError::SizeTooSmall(size));
    }
    let mut rng = XorShift64Star::substream(seed, &format!("generate/{kind}"));
    let mut out = Vec::with_capacity(size);
    match kind {
        BinaryKind::CodeLike => ByteSampler::new(&CODE_WEIGHTS).fill(&mut rng, &mut out, size),
        BinaryKind::TextLike => ByteSampler::new(&TEXT_WEIGHTS).fill(&mut rng, &mut out, size),
        BinaryKind::Sparse => fill_sparse(&mut rng, &mut out, size),
        BinaryKind::Mixed => {
            let code = ByteSampler::new(&CODE_WEIGHTS);
            let text = ByteSampler::new(&TEXT_WEIGHTS);
            let sizes = [size / 2, size / 4, size - size / 2 - size / 4];
            for (i, (label, len)) in SECTION_LABELS.iter().zip(sizes).enumerate() {
                out.extend_from_slice(*label);
                let body = len - label.len();
                match i {
                    0 => code.fill(&mut rng, &mut out, body),
                    1 => text.fill(&mut rng, &mut out, body),
                    _ => {
                        let mut tail = Vec::with_capacity(body);
                        fill_sparse(&mut rng, &mut tail, body);
                        out.extend_from_slice(&tail);
                    }
                }
            }
        }
    }
    debug_assert_eq!(out.len(), size);
    Ok(out)
}

fn fill_sparse(rng: &mut XorShift64Star, out: &mut Vec<u8>, size: usize) {
    let code = ByteSampler::new(&CODE_WEIGHTS);
    let target = out.len() + size;
    while out.len() < target {
        let zeros = (16 + rng.below_usize(496)).min(target - out.len());
        out.resize(out.len() + zeros, 0);
        let run = (16 + rng.below_usize(240)).min(target - out.len());
        code.fill(rng, out, run);
    }
}
