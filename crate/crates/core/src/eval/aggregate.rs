use super::{EvalError, Metrics, Result};

/// Mean, sample standard deviation and 95% half-width of one metric.
/// Dispersion needs at least two runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricStats {
    pub mean: f64,
    pub std: Option<f64>,
    pub ci95: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub runs: Vec<Metrics>,
    /// In `METRIC_NAMES` order.
    pub stats: [MetricStats; 6],
}

impl RunReport {
    pub fn means(&self) -> [f64; 6] {
        self.stats.map(|s| s.mean)
    }
}

pub fn aggregate_runs(runs: &[Metrics]) -> Result<RunReport> {
    if runs.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let n = runs.len() as f64;
    let stats = std::array::from_fn(|i| {
        let mean = runs.iter().map(|m| m.values()[i]).sum::<f64>() / n;
        let std = (runs.len() >= 2).then(|| {
            let ss = runs.iter().map(|m| (m.values()[i] - mean).powi(2)).sum::<f64>();
            (ss / (n - 1.0)).sqrt()
        });
        MetricStats { mean, std, ci95: std.map(|s| 1.96 * s / n.sqrt()) }
    });
    Ok(RunReport { runs: runs.to_vec(), stats })
}
