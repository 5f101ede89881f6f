use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    generate_synthetic_binary, toy_pack, BinaryKind, DatasetError, Label, Manifest, PackSpec, PackVariant, Result,
    Sample, Split, MIN_SAMPLE_SIZE,
};
use crate::fsutil::write_atomic;
use crate::rng::XorShift64Star;

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const SAMPLES_DIR: &str = "samples";

/// Per-variant sample counts and the size range for generated payloads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusConfig {
    pub code: usize,
    pub text: usize,
    pub mixed: usize,
    pub sparse: usize,
    pub tpk_a: usize,
    pub tpk_b: usize,
    /// Held-out "unknown packer" samples; always assigned to the holdout split.
    pub tpk_c: usize,
    pub min_size: usize,
    pub max_size: usize,
}

impl Default for CorpusConfig {
    /// 400 non-packed, 400 packed (A+B) and 100 variant-C holdout samples.
    fn default() -> Self {
        Self {
            code: 100,
            text: 100,
            mixed: 100,
            sparse: 100,
            tpk_a: 200,
            tpk_b: 200,
            tpk_c: 100,
            min_size: 16 * 1024,
            max_size: 256 * 1024,
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.code + self.text + self.mixed + self.sparse == 0 {
            return Err(DatasetError::InvalidConfig("no non-packed samples requested".into()));
        }
        if self.tpk_a + self.tpk_b + self.tpk_c == 0 {
            return Err(DatasetError::InvalidConfig("no packed samples requested".into()));
        }
        if self.min_size < MIN_SAMPLE_SIZE || self.max_size < self.min_size {
            return Err(DatasetError::InvalidConfig(format!(
                "size range {}..={} must start at {MIN_SAMPLE_SIZE} or more and be non-empty",
                self.min_size, self.max_size
            )));
        }
        Ok(())
    }

    fn plan(&self) -> Vec<Job> {
        let mut jobs = Vec::new();
        let raw = [
            (BinaryKind::CodeLike, self.code),
            (BinaryKind::TextLike, self.text),
            (BinaryKind::Mixed, self.mixed),
            (BinaryKind::Sparse, self.sparse),
        ];
        for (kind, n) in raw {
            jobs.extend((0..n).map(|i| Job { origin: Origin::Raw(kind), index: i }));
        }
        let packed = [(PackVariant::A, self.tpk_a), (PackVariant::B, self.tpk_b), (PackVariant::C, self.tpk_c)];
        for (v, n) in packed {
            jobs.extend((0..n).map(|i| Job { origin: Origin::Packed(v), index: i }));
        }
        jobs
    }
}

#[derive(Debug, Clone, Copy)]
enum Origin {
    Raw(BinaryKind),
    Packed(PackVariant),
}

#[derive(Debug, Clone, Copy)]
struct Job {
    origin: Origin,
    index: usize,
}

impl Job {
    fn variant_tag(&self) -> &'static str {
        match self.origin {
            Origin::Raw(k) => k.variant_tag(),
            Origin::Packed(v) => v.variant_tag(),
        }
    }

    fn id(&self) -> String {
        format!("{}-{:05}", self.variant_tag(), self.index)
    }

    /// Every sample draws from its own sub-stream, so generation order does
    /// not affect the bytes.
    fn bytes(&self, cfg: &CorpusConfig, seed: u64) -> Result<Vec<u8>> {
        let mut rng = XorShift64Star::substream(seed, &format!("sample/{}", self.id()));
        let size = log_uniform_size(&mut rng, cfg.min_size, cfg.max_size);
        match self.origin {
            Origin::Raw(kind) => generate_synthetic_binary(kind, size, rng.next_u64()),
            Origin::Packed(v) => {
                let kind = BinaryKind::ALL[rng.below_usize(BinaryKind::ALL.len())];
                let payload = generate_synthetic_binary(kind, size, rng.next_u64())?;
                toy_pack(&payload, &PackSpec::from_seed(v, rng.next_u64()))
            }
        }
    }
}

fn log_uniform_size(rng: &mut XorShift64Star, min: usize, max: usize) -> usize {
    if min == max {
        return min;
    }
    let (lo, hi) = ((min as f64).ln(), (max as f64 + 1.0).ln());
    (rng.uniform(lo, hi).exp() as usize).clamp(min, max)
}

/// Generates every sample under `out_dir/samples/` and writes
/// `out_dir/manifest.jsonl`. Variant-C samples go to the holdout split; all
/// others start unassigned.
pub fn build_corpus(cfg: &CorpusConfig, seed: u64, out_dir: &Path) -> Result<Manifest> {
    cfg.validate()?;
    let sample_dir = out_dir.join(SAMPLES_DIR);
    std::fs::create_dir_all(&sample_dir)?;

    let samples = cfg
        .plan()
        .par_iter()
        .map(|job| {
            let bytes = job.bytes(cfg, seed)?;
            let id = job.id();
            let rel = format!("{SAMPLES_DIR}/{id}.bin");
            write_atomic(&out_dir.join(&rel), &bytes)?;
            let split = match job.origin {
                Origin::Packed(PackVariant::C) => Split::Holdout,
                _ => Split::Unassigned,
            };
            let variant = job.variant_tag().to_owned();
            Ok(Sample { id, path: rel, label: Label::from_variant(&variant), variant, len: bytes.len() as u64, split })
        })
        .collect::<Result<Vec<_>>>()?;

    let manifest = Manifest { samples, ..Manifest::new(seed) };
    manifest.validate()?;
    manifest.save(&out_dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}
