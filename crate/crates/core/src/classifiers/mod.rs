//! Classical classifiers over Gabor-jet feature vectors.
//!
//! Every model standardizes its inputs with a [`StandardScaler`] fitted on
//! the training rows and produces a score in `[0, 1]`; the predicted label
//! is `score >= 0.5`, so a borderline sample counts as packed.

mod forest;
mod knn;
mod linear;
mod mlp;
mod persist;
mod scaler;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use forest::{best_split, DecisionTree, ForestModel, ForestParams, Node, SplitCandidate};
pub use knn::KnnModel;
pub use linear::{
    logreg_loss_and_gradient, sigmoid, svm_objective_and_subgradient, LinearModel, LogRegParams, SvmParams,
};
pub use mlp::{Layer, MlpModel, MlpParams};
pub use persist::{MODEL_MAGIC, MODEL_VERSION};
pub use scaler::StandardScaler;

#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("k = {k} but only {n} training rows")]
    KTooLarge { k: usize, n: usize },
    #[error("labels must be 0 or 1, found {0}")]
    NonBinaryLabels(u8),
    #[error("{rows} rows but {labels} labels")]
    LabelCountMismatch { rows: usize, labels: usize },
    #[error("non-finite feature value in row {0}")]
    NonFiniteFeature(usize),
    #[error("loss diverged at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
    #[error("unsupported model file version {0}")]
    VersionMismatch(u16),
    #[error("corrupt model file: {0}")]
    CorruptModel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ClassifierError>;

/// Common dimensionality of `rows`; rejects empty or ragged input.
pub(crate) fn check_rows(rows: &[Vec<f64>]) -> Result<usize> {
    let first = rows.first().ok_or(ClassifierError::EmptyTrainingSet)?;
    let dim = first.len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != dim {
            return Err(ClassifierError::DimensionMismatch { expected: dim, got: r.len() });
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(ClassifierError::NonFiniteFeature(i));
        }
    }
    Ok(dim)
}

fn check_labels(rows: &[Vec<f64>], labels: &[u8]) -> Result<()> {
    if rows.len() != labels.len() {
        return Err(ClassifierError::LabelCountMismatch { rows: rows.len(), labels: labels.len() });
    }
    match labels.iter().find(|&&l| l > 1) {
        Some(&l) => Err(ClassifierError::NonBinaryLabels(l)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "knn")]
    Knn,
    #[serde(rename = "logreg")]
    LogReg,
    #[serde(rename = "rf")]
    RandomForest,
    #[serde(rename = "mlp")]
    Mlp,
    #[serde(rename = "svm")]
    LinearSvm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] =
        [ModelKind::Knn, ModelKind::LogReg, ModelKind::RandomForest, ModelKind::Mlp, ModelKind::LinearSvm];

    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Knn => "knn",
            ModelKind::LogReg => "logreg",
            ModelKind::RandomForest => "rf",
            ModelKind::Mlp => "mlp",
            ModelKind::LinearSvm => "svm",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            ModelKind::Knn => 1,
            ModelKind::LogReg => 2,
            ModelKind::RandomForest => 3,
            ModelKind::Mlp => 4,
            ModelKind::LinearSvm => 5,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.code() == code)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| format!("unknown model kind `{s}` (expected knn, logreg, rf, mlp or svm)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self { k: 5 }
    }
}

/// Hyperparameters for every model kind; only the chosen kind's section is used.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Hyperparameters {
    pub knn: KnnParams,
    pub logreg: LogRegParams,
    pub svm: SvmParams,
    pub rf: ForestParams,
    pub mlp: MlpParams,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelBody {
    Knn(KnnModel),
    LogReg { params: LogRegParams, model: LinearModel },
    LinearSvm { params: SvmParams, model: LinearModel },
    RandomForest { params: ForestParams, model: ForestModel },
    Mlp { params: MlpParams, model: MlpModel },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub scaler: StandardScaler,
    pub seed: u64,
    pub body: ModelBody,
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self.body {
            ModelBody::Knn(_) => ModelKind::Knn,
            ModelBody::LogReg { .. } => ModelKind::LogReg,
            ModelBody::LinearSvm { .. } => ModelKind::LinearSvm,
            ModelBody::RandomForest { .. } => ModelKind::RandomForest,
            ModelBody::Mlp { .. } => ModelKind::Mlp,
        }
    }

    pub fn dim(&self) -> usize {
        self.scaler.dim()
    }

    pub fn predict_confidence(&self, x: &[f64]) -> Result<f64> {
        let z = self.scaler.transform(x)?;
        let s = match &self.body {
            ModelBody::Knn(m) => m.score(&z),
            ModelBody::LogReg { model, .. } | ModelBody::LinearSvm { model, .. } => model.score(&z),
            ModelBody::RandomForest { model, .. } => model.score(&z),
            ModelBody::Mlp { model, .. } => model.score(&z),
        };
        Ok(s.clamp(0.0, 1.0))
    }

    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        Ok(label_for(self.predict_confidence(x)?))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::fsutil::write_atomic(path, &self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        persist::encode(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        persist::decode(bytes)
    }
}

/// Scores of exactly 0.5 resolve to packed.
pub fn label_for(score: f64) -> u8 {
    (score >= 0.5) as u8
}

fn prepare(rows: &[Vec<f64>], labels: &[u8]) -> Result<(StandardScaler, Vec<Vec<f64>>)> {
    check_rows(rows)?;
    check_labels(rows, labels)?;
    let scaler = StandardScaler::fit(rows)?;
    let scaled = scaler.transform_rows(rows)?;
    Ok((scaler, scaled))
}

pub fn train_knn(rows: &[Vec<f64>], labels: &[u8], k: usize) -> Result<TrainedModel> {
    let (scaler, scaled) = prepare(rows, labels)?;
    let model = KnnModel::fit(scaled, labels.to_vec(), k)?;
    Ok(TrainedModel { scaler, seed: 0, body: ModelBody::Knn(model) })
}

pub fn train_logreg(rows: &[Vec<f64>], labels: &[u8], params: &LogRegParams) -> Result<TrainedModel> {
    let (scaler, scaled) = prepare(rows, labels)?;
    let model = linear::fit_logreg(&scaled, labels, params)?;
    Ok(TrainedModel { scaler, seed: 0, body: ModelBody::LogReg { params: *params, model } })
}

pub fn train_linear_svm(rows: &[Vec<f64>], labels: &[u8], params: &SvmParams) -> Result<TrainedModel> {
    let (scaler, scaled) = prepare(rows, labels)?;
    let model = linear::fit_svm(&scaled, labels, params)?;
    Ok(TrainedModel { scaler, seed: 0, body: ModelBody::LinearSvm { params: *params, model } })
}

pub fn train_random_forest(rows: &[Vec<f64>], labels: &[u8], params: &ForestParams, seed: u64) -> Result<TrainedModel> {
    let (scaler, scaled) = prepare(rows, labels)?;
    let model = forest::fit_forest(&scaled, labels, params, seed)?;
    Ok(TrainedModel { scaler, seed, body: ModelBody::RandomForest { params: *params, model } })
}

pub fn train_mlp(rows: &[Vec<f64>], labels: &[u8], params: &MlpParams, seed: u64) -> Result<TrainedModel> {
    let (scaler, scaled) = prepare(rows, labels)?;
    let model = mlp::fit_mlp(&scaled, labels, params, seed)?;
    Ok(TrainedModel { scaler, seed, body: ModelBody::Mlp { params: params.clone(), model } })
}

pub fn train(
    kind: ModelKind,
    rows: &[Vec<f64>],
    labels: &[u8],
    hp: &Hyperparameters,
    seed: u64,
) -> Result<TrainedModel> {
    let mut model = match kind {
        ModelKind::Knn => train_knn(rows, labels, hp.knn.k)?,
        ModelKind::LogReg => train_logreg(rows, labels, &hp.logreg)?,
        ModelKind::LinearSvm => train_linear_svm(rows, labels, &hp.svm)?,
        ModelKind::RandomForest => train_random_forest(rows, labels, &hp.rf, seed)?,
        ModelKind::Mlp => train_mlp(rows, labels, &hp.mlp, seed)?,
    };
    model.seed = seed;
    Ok(model)
}
