//! Detection metrics, multi-run aggregation and the CSV reports consumed by
//! plotting tools and by the CNN trainer.

mod aggregate;
mod confidence;
mod epoch_log;
mod metrics;
mod report;

pub use aggregate::{aggregate_runs, MetricStats, RunReport};
pub use confidence::{confidence_report, Bucket, ConfidenceReport, DEFAULT_EDGES};
pub use epoch_log::{epoch_log_append, read_epoch_log, EpochRecord, EpochSplit, EPOCH_LOG_HEADER};
pub use metrics::{compute_metrics, confusion_from_predictions, ConfusionMatrix, Metrics, Undefined, METRIC_NAMES};
pub use report::{
    metrics_csv, parse_metrics_csv, parse_predictions_csv, predictions_csv, MetricsRecord, PredictionRow,
    METRICS_HEADER, PREDICTIONS_HEADER,
};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("no rows to evaluate")]
    EmptyInput,
    #[error("value {0} is not a binary label")]
    NonBinaryValue(u8),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("score {0} outside [0, 1]")]
    ScoreOutOfRange(f64),
    #[error("bucket edges must be at least two strictly increasing values")]
    InvalidEdges,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, EvalError>;
