//! `packscope` command-line interface.
//!
//! Every subcommand reads an optional JSON [`RunConfig`]; flags given on the
//! command line take precedence over the file. `PACKSCOPE_THREADS` caps the
//! worker pool.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

pub use commands::*;
pub use config::{Paths, RunConfig};

use crate::byteplot::WidthPolicy;
use crate::classifiers::{ModelKind, TrainedModel};
use crate::dataset::{Split, MANIFEST_FILE};

pub const THREADS_ENV: &str = "PACKSCOPE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "packscope", version, about = "Packed-executable detection from byte-plot textures")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct WidthArg {
    /// Byte-plot width: `adaptive` or `fixed:N`.
    #[arg(long)]
    pub width: Option<WidthPolicy>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the synthetic corpus, its manifest and split assignment.
    CorpusGen {
        /// Corpus directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export byte plots as grayscale PNGs.
    ImageExport {
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Output size as WxH (default 224x224).
        #[arg(long, value_parser = parse_size, conflicts_with = "native")]
        size: Option<[usize; 2]>,
        /// Keep the native byte-plot size.
        #[arg(long)]
        native: bool,
        #[arg(long)]
        split: Option<Split>,
        #[command(flatten)]
        width: WidthArg,
    },
    /// Extract Gabor jets into a binary archive and a CSV twin.
    Features {
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Archive path; the CSV gets the same stem.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        width: WidthArg,
    },
    /// Train a classifier on the over-sampled train split.
    Train {
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Model file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        model_kind: Option<ModelKind>,
        /// Repeat training with derived seeds and report aggregate test metrics.
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        reports: Option<PathBuf>,
    },
    /// Score one split and write predictions, metrics and confidence reports.
    Eval {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, default_value = "test")]
        split: Split,
        /// Reports directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify files; exit status 2 if any is packed.
    Scan {
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        width: WidthArg,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn parse_size(s: &str) -> Result<[usize; 2], String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let w: usize = w.parse().map_err(|_| format!("bad width in `{s}`"))?;
    let h: usize = h.parse().map_err(|_| format!("bad height in `{s}`"))?;
    if w == 0 || h == 0 {
        return Err("size must be positive".into());
    }
    Ok([w, h])
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_ENV}={v} is not a positive integer"))?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn build_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    match &cli.command {
        Command::CorpusGen { out } => {
            if let Some(o) = out {
                cfg.paths.corpus_dir = o.clone();
            }
        }
        Command::ImageExport { size, width, .. } => {
            if let Some(s) = size {
                cfg.image_size = *s;
            }
            apply_width(&mut cfg, width);
        }
        Command::Features { out, width, .. } => {
            if let Some(o) = out {
                cfg.paths.features = o.clone();
            }
            apply_width(&mut cfg, width);
        }
        Command::Train { features, out, model_kind, runs, reports, .. } => {
            if let Some(f) = features {
                cfg.paths.features = f.clone();
            }
            if let Some(o) = out {
                cfg.paths.model = o.clone();
            }
            if let Some(k) = model_kind {
                cfg.model_kind = *k;
            }
            if let Some(r) = runs {
                cfg.runs = *r;
            }
            if let Some(r) = reports {
                cfg.paths.reports_dir = r.clone();
            }
        }
        Command::Eval { model, features, out, .. } => {
            if let Some(m) = model {
                cfg.paths.model = m.clone();
            }
            if let Some(f) = features {
                cfg.paths.features = f.clone();
            }
            if let Some(o) = out {
                cfg.paths.reports_dir = o.clone();
            }
        }
        Command::Scan { model, width, .. } => {
            if let Some(m) = model {
                cfg.paths.model = m.clone();
            }
            apply_width(&mut cfg, width);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply_width(cfg: &mut RunConfig, w: &WidthArg) {
    if let Some(p) = w.width {
        cfg.width = p.to_string();
    }
}

fn manifest_path(cfg: &RunConfig, flag: &Option<PathBuf>) -> PathBuf {
    flag.clone().unwrap_or_else(|| cfg.paths.corpus_dir.join(MANIFEST_FILE))
}

fn execute(cli: &Cli, cfg: &RunConfig) -> anyhow::Result<ExitCode> {
    let policy = cfg.width_policy()?;
    match &cli.command {
        Command::CorpusGen { .. } => {
            let m = cmd_corpus_gen(cfg, &cfg.paths.corpus_dir)?;
            println!("wrote {} samples to {}", m.samples.len(), cfg.paths.corpus_dir.display());
        }
        Command::ImageExport { manifest, out, native, split, .. } => {
            let size = (!native).then_some(cfg.image_size);
            let n = cmd_image_export(&manifest_path(cfg, manifest), policy, size, *split, out)?;
            println!("exported {n} images to {}", out.display());
        }
        Command::Features { manifest, .. } => {
            let batch = cmd_features(&manifest_path(cfg, manifest), &cfg.bank, policy, &cfg.paths.features)?;
            for (id, err) in &batch.failures {
                eprintln!("packscope: warning: {id}: {err}");
            }
            println!(
                "extracted {} feature rows ({} failed) to {}",
                batch.table.len(),
                batch.failures.len(),
                cfg.paths.features.display()
            );
        }
        Command::Train { manifest, .. } => {
            let out = cmd_train(
                cfg,
                &cfg.paths.features,
                &manifest_path(cfg, manifest),
                &cfg.paths.model,
                &cfg.paths.reports_dir,
            )?;
            println!("trained {} on {} rows, saved {}", cfg.model_kind, out.train_rows, cfg.paths.model.display());
            if let Some(r) = &out.report {
                let m = r.means();
                println!("{} runs, mean test accuracy {:.4}, mean f1 {:.4}", r.runs.len(), m[0], m[3]);
            }
        }
        Command::Eval { manifest, split, .. } => {
            let out = cmd_eval(
                &cfg.paths.model,
                &cfg.paths.features,
                &manifest_path(cfg, manifest),
                *split,
                &cfg.paths.reports_dir,
            )?;
            print!("{}", format_eval(*split, &out));
        }
        Command::Scan { files, .. } => {
            let model = TrainedModel::load(&cfg.paths.model)
                .with_context(|| format!("loading model {}", cfg.paths.model.display()))?;
            let mut failed = false;
            let mut packed = false;
            for f in files {
                match scan_file(&model, f, &cfg.bank, policy) {
                    Ok(v) => {
                        packed |= v.packed;
                        println!("{}", format_verdict(f, &v));
                    }
                    Err(e) => {
                        failed = true;
                        eprintln!("packscope: error: {e:#}");
                    }
                }
            }
            return Ok(ExitCode::from(if failed {
                1
            } else if packed {
                2
            } else {
                0
            }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Parses `args` and runs the selected command. Errors become a one-line
/// diagnostic on stderr and exit status 1.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = configure_threads().and_then(|()| build_config(&cli)).and_then(|cfg| execute(&cli, &cfg));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("packscope: error: {e:#}");
            ExitCode::from(1)
        }
    }
}
