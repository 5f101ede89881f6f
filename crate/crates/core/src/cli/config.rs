use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use crate::byteplot::WidthPolicy;
use crate::classifiers::{Hyperparameters, ModelKind};
use crate::dataset::{CorpusConfig, SplitFractions};
use crate::gabor::GaborBank;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Paths {
    pub corpus_dir: PathBuf,
    /// Feature archive; the CSV twin sits next to it with a `.csv` extension.
    pub features: PathBuf,
    pub model: PathBuf,
    pub reports_dir: PathBuf,
}

impl Default for Paths {
    fn default() -> Self {
        Self {
            corpus_dir: "corpus".into(),
            features: "features.psfa".into(),
            model: "model.psmd".into(),
            reports_dir: "reports".into(),
        }
    }
}

/// Settings shared by every subcommand. Loaded from a JSON file; command-line
/// flags override individual fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub paths: Paths,
    pub corpus: CorpusConfig,
    pub split: SplitFractions,
    pub bank: GaborBank,
    /// `adaptive` or `fixed:N`.
    pub width: String,
    pub model_kind: ModelKind,
    pub hyperparameters: Hyperparameters,
    pub runs: usize,
    /// `[width, height]` of exported PNGs.
    pub image_size: [usize; 2],
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            paths: Paths::default(),
            corpus: CorpusConfig::default(),
            split: SplitFractions::default(),
            bank: GaborBank::default(),
            width: WidthPolicy::Adaptive.to_string(),
            model_kind: ModelKind::RandomForest,
            hyperparameters: Hyperparameters::default(),
            runs: 1,
            image_size: [224, 224],
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn width_policy(&self) -> anyhow::Result<WidthPolicy> {
        self.width.parse().map_err(|e| anyhow::anyhow!("width: {e}"))
    }

    /// Checks everything that can be checked before any work starts.
    pub fn validate(&self) -> anyhow::Result<()> {
        self.width_policy()?;
        self.corpus.validate()?;
        self.split.validate()?;
        self.bank.kernels()?;
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        if self.image_size.contains(&0) {
            bail!("image_size must be positive");
        }
        Ok(())
    }
}
