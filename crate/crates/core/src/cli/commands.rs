use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

use super::config::RunConfig;
use crate::byteplot::{bytes_to_image, export_png, resize_image, ResizeMethod, WidthPolicy};
use crate::classifiers::{self, label_for, TrainedModel};
use crate::dataset::{
    balanced_train_ids, build_corpus, stratified_split, Manifest, Split, BALANCED_TRAIN_FILE, MANIFEST_FILE,
};
use crate::eval::{
    aggregate_runs, compute_metrics, confidence_report, confusion_from_predictions, metrics_csv, predictions_csv,
    ConfusionMatrix, Metrics, PredictionRow, RunReport, DEFAULT_EDGES,
};
use crate::fsutil::write_atomic;
use crate::gabor::{extract_batch, jet_from_bytes, read_features, BatchOutput, FeatureTable, GaborBank};
use crate::rng::derive_seed;

fn manifest_root(manifest_path: &Path) -> PathBuf {
    manifest_path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn load_manifest(path: &Path) -> anyhow::Result<Manifest> {
    Manifest::load(path).with_context(|| format!("loading manifest {}", path.display()))
}

/// Generates the corpus, assigns train/val/test splits and writes the
/// over-sampled train id list next to the manifest.
pub fn cmd_corpus_gen(cfg: &RunConfig, out_dir: &Path) -> anyhow::Result<Manifest> {
    let raw = build_corpus(&cfg.corpus, cfg.seed, out_dir)?;
    let manifest = stratified_split(&raw, cfg.split, cfg.seed)?;
    manifest.save(&out_dir.join(MANIFEST_FILE))?;
    let mut list = String::new();
    for id in balanced_train_ids(&manifest)? {
        list.push_str(&id);
        list.push('\n');
    }
    write_atomic(&out_dir.join(BALANCED_TRAIN_FILE), list.as_bytes())?;
    Ok(manifest)
}

/// Writes `<out_dir>/<id>.png` for every selected sample. `size = None`
/// keeps the native byte-plot dimensions.
pub fn cmd_image_export(
    manifest_path: &Path,
    policy: WidthPolicy,
    size: Option<[usize; 2]>,
    split: Option<Split>,
    out_dir: &Path,
) -> anyhow::Result<usize> {
    let manifest = load_manifest(manifest_path)?;
    let root = manifest_root(manifest_path);
    std::fs::create_dir_all(out_dir)?;
    let mut n = 0;
    for s in manifest.samples.iter().filter(|s| split.is_none_or(|sp| s.split == sp)) {
        let bytes = std::fs::read(root.join(&s.path)).with_context(|| format!("reading sample {}", s.id))?;
        let mut img = bytes_to_image(&bytes, policy)?;
        if let Some([w, h]) = size {
            img = resize_image(&img, w, h, ResizeMethod::Bilinear)?;
        }
        export_png(&img, &out_dir.join(format!("{}.png", s.id)))?;
        n += 1;
    }
    Ok(n)
}

/// CSV twin of a feature archive path.
pub fn csv_path(archive: &Path) -> PathBuf {
    archive.with_extension("csv")
}

/// Extracts jets for every manifest sample; writes the archive to `out` and
/// the CSV to the same path with a `.csv` extension.
pub fn cmd_features(
    manifest_path: &Path,
    bank: &GaborBank,
    policy: WidthPolicy,
    out: &Path,
) -> anyhow::Result<BatchOutput> {
    if out.extension().is_some_and(|e| e == "csv") {
        bail!("--out names the binary archive; the CSV is written next to it");
    }
    let manifest = load_manifest(manifest_path)?;
    let batch = extract_batch(&manifest, &manifest_root(manifest_path), bank, policy)?;
    let labels: Vec<u8> =
        batch.table.ids().iter().map(|id| manifest.get(id).map(|s| s.label.as_u8()).unwrap()).collect();
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_atomic(out, &batch.table.to_archive_bytes()?)?;
    write_atomic(&csv_path(out), batch.table.to_csv(&labels, &bank.feature_names())?.as_bytes())?;
    Ok(batch)
}

/// Feature rows joined with manifest labels.
#[derive(Debug, Default)]
pub struct Dataset {
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    /// Requested ids with no feature row.
    pub missing: Vec<String>,
}

fn gather<'a>(
    table: &FeatureTable,
    manifest: &Manifest,
    ids: impl Iterator<Item = &'a str>,
) -> anyhow::Result<Dataset> {
    let index: HashMap<&str, usize> = table.ids().iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let mut d = Dataset::default();
    for id in ids {
        let sample = manifest.get(id).with_context(|| format!("id {id} not in manifest"))?;
        match index.get(id) {
            Some(&i) => {
                d.ids.push(id.to_owned());
                d.rows.push(table.row(i).to_vec());
                d.labels.push(sample.label.as_u8());
            }
            None => d.missing.push(id.to_owned()),
        }
    }
    Ok(d)
}

pub fn split_dataset(table: &FeatureTable, manifest: &Manifest, split: Split) -> anyhow::Result<Dataset> {
    gather(table, manifest, manifest.in_split(split).map(|s| s.id.as_str()))
}

/// Train split after random over-sampling.
pub fn balanced_train_dataset(table: &FeatureTable, manifest: &Manifest) -> anyhow::Result<Dataset> {
    let ids = balanced_train_ids(manifest)?;
    gather(table, manifest, ids.iter().map(String::as_str))
}

fn warn_missing(d: &Dataset, what: &str) {
    if !d.missing.is_empty() {
        eprintln!("packscope: warning: {} {what} samples have no feature row and were skipped", d.missing.len());
    }
}

pub fn load_table(path: &Path) -> anyhow::Result<FeatureTable> {
    Ok(read_features(path).with_context(|| format!("loading features {}", path.display()))?.0)
}

/// Seed used for run `r` of a multi-run training job.
pub fn run_seed(seed: u64, r: usize) -> u64 {
    derive_seed(seed, &format!("run/{r}"))
}

pub fn predict_dataset(model: &TrainedModel, d: &Dataset) -> anyhow::Result<Vec<PredictionRow>> {
    d.ids
        .iter()
        .zip(&d.rows)
        .zip(&d.labels)
        .map(|((id, row), &label)| {
            let score = model.predict_confidence(row)?;
            Ok(PredictionRow { id: id.clone(), label, pred: label_for(score), score })
        })
        .collect()
}

pub fn score_predictions(rows: &[PredictionRow]) -> anyhow::Result<(ConfusionMatrix, Metrics)> {
    let pairs: Vec<(u8, u8)> = rows.iter().map(|r| (r.label, r.pred)).collect();
    let cm = confusion_from_predictions(&pairs)?;
    Ok((cm, compute_metrics(&cm)?))
}

#[derive(Debug)]
pub struct TrainOutcome {
    pub model: TrainedModel,
    pub train_rows: usize,
    /// Present when more than one run was requested.
    pub report: Option<RunReport>,
}

/// Trains on the over-sampled train split and saves the first run's model.
/// With `runs > 1` every run is scored on the test split and the aggregate
/// is written to `<reports_dir>/metrics_<kind>.csv`.
pub fn cmd_train(
    cfg: &RunConfig,
    features: &Path,
    manifest_path: &Path,
    model_out: &Path,
    reports_dir: &Path,
) -> anyhow::Result<TrainOutcome> {
    let table = load_table(features)?;
    let manifest = load_manifest(manifest_path)?;
    let train = balanced_train_dataset(&table, &manifest)?;
    warn_missing(&train, "train");
    if train.rows.is_empty() {
        bail!("no training rows");
    }
    let test = if cfg.runs > 1 {
        let t = split_dataset(&table, &manifest, Split::Test)?;
        warn_missing(&t, "test");
        if t.rows.is_empty() {
            bail!("multi-run training needs a non-empty test split");
        }
        Some(t)
    } else {
        None
    };

    let mut first = None;
    let mut runs = Vec::new();
    for r in 0..cfg.runs {
        let model = classifiers::train(
            cfg.model_kind,
            &train.rows,
            &train.labels,
            &cfg.hyperparameters,
            run_seed(cfg.seed, r),
        )?;
        if let Some(test) = &test {
            runs.push(score_predictions(&predict_dataset(&model, test)?)?.1);
        }
        if first.is_none() {
            first = Some(model);
        }
    }
    let model = first.expect("runs >= 1");
    if let Some(dir) = model_out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    model.save(model_out)?;

    let report = if test.is_some() {
        let report = aggregate_runs(&runs)?;
        std::fs::create_dir_all(reports_dir)?;
        let tag = cfg.model_kind.tag();
        write_atomic(&reports_dir.join(format!("metrics_{tag}.csv")), metrics_csv(tag, &report).as_bytes())?;
        Some(report)
    } else {
        None
    };
    Ok(TrainOutcome { model, train_rows: train.rows.len(), report })
}

#[derive(Debug)]
pub struct EvalOutcome {
    pub predictions: Vec<PredictionRow>,
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
}

/// Scores one split and writes `predictions_<split>.csv`,
/// `metrics_<split>.csv` and `confidence_<split>.csv` under `out_dir`.
pub fn cmd_eval(
    model_path: &Path,
    features: &Path,
    manifest_path: &Path,
    split: Split,
    out_dir: &Path,
) -> anyhow::Result<EvalOutcome> {
    let model = TrainedModel::load(model_path).with_context(|| format!("loading model {}", model_path.display()))?;
    let table = load_table(features)?;
    let manifest = load_manifest(manifest_path)?;
    let data = split_dataset(&table, &manifest, split)?;
    warn_missing(&data, split.as_str());
    if data.rows.is_empty() {
        bail!("split `{}` has no samples with features", split.as_str());
    }
    let predictions = predict_dataset(&model, &data)?;
    let (confusion, metrics) = score_predictions(&predictions)?;
    let report = aggregate_runs(&[metrics])?;
    let scored: Vec<(u8, f64)> = predictions.iter().map(|p| (p.label, p.score)).collect();
    let conf = confidence_report(&scored, &DEFAULT_EDGES)?;

    std::fs::create_dir_all(out_dir)?;
    let s = split.as_str();
    write_atomic(&out_dir.join(format!("predictions_{s}.csv")), predictions_csv(&predictions).as_bytes())?;
    write_atomic(&out_dir.join(format!("metrics_{s}.csv")), metrics_csv(model.kind().tag(), &report).as_bytes())?;
    write_atomic(&out_dir.join(format!("confidence_{s}.csv")), conf.to_csv().as_bytes())?;
    Ok(EvalOutcome { predictions, confusion, metrics })
}

pub fn format_eval(split: Split, out: &EvalOutcome) -> String {
    let cm = &out.confusion;
    let m = &out.metrics;
    let mut s = String::new();
    writeln!(s, "split {}: {} samples", split.as_str(), cm.total()).unwrap();
    writeln!(s, "tp={} fp={} tn={} fn={}", cm.tp, cm.fp, cm.tn, cm.fn_).unwrap();
    let undefined =
        [false, m.undefined.precision, m.undefined.recall, m.undefined.f1, m.undefined.fpr, m.undefined.fnr];
    for ((name, v), u) in crate::eval::METRIC_NAMES.iter().zip(m.values()).zip(undefined) {
        if u {
            writeln!(s, "{name:<9} undefined").unwrap();
        } else {
            writeln!(s, "{name:<9} {v:.4}").unwrap();
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub packed: bool,
    /// Confidence in the verdict: the score for packed, `1 - score` otherwise.
    pub confidence: f64,
}

pub fn scan_file(model: &TrainedModel, path: &Path, bank: &GaborBank, policy: WidthPolicy) -> anyhow::Result<Verdict> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let jet = jet_from_bytes(&bytes, policy, bank)?;
    let score = model.predict_confidence(jet.values())?;
    let packed = label_for(score) == 1;
    Ok(Verdict { packed, confidence: if packed { score } else { 1.0 - score } })
}

pub fn format_verdict(path: &Path, v: &Verdict) -> String {
    let word = if v.packed { "packed" } else { "non-packed" };
    format!("{},{word},{:.6}", path.display(), v.confidence)
}
