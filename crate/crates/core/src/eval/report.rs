//! Predictions and metrics CSV files.
//!
//! Predictions: `id,label,pred,score`.
//!
//! Metrics: `model,run,accuracy,precision,recall,f1,fpr,fnr`, one row per run
//! (1-based), then `MEAN±STD` and `MEAN±CI95` aggregate rows whose cells read
//! `<mean>±<spread>`; the spread is `NA` with fewer than two runs.

use std::fmt::Write as _;

use super::{EvalError, Metrics, Result, RunReport, METRIC_NAMES};

pub const PREDICTIONS_HEADER: &str = "id,label,pred,score";
pub const METRICS_HEADER: &str = "model,run,accuracy,precision,recall,f1,fpr,fnr";

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub id: String,
    pub label: u8,
    pub pred: u8,
    pub score: f64,
}

pub fn predictions_csv(rows: &[PredictionRow]) -> String {
    let mut s = format!("{PREDICTIONS_HEADER}\n");
    for r in rows {
        writeln!(s, "{},{},{},{}", r.id, r.label, r.pred, r.score).unwrap();
    }
    s
}

fn parse_err(line: usize, what: &str) -> EvalError {
    EvalError::Parse(format!("line {line}: {what}"))
}

pub fn parse_predictions_csv(text: &str) -> Result<Vec<PredictionRow>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(PREDICTIONS_HEADER) {
        return Err(EvalError::Parse(format!("expected header `{PREDICTIONS_HEADER}`")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let n = i + 2;
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 4 {
            return Err(parse_err(n, "expected 4 fields"));
        }
        let bit = |s: &str| match s {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            _ => Err(parse_err(n, "label/pred must be 0 or 1")),
        };
        out.push(PredictionRow {
            id: f[0].to_owned(),
            label: bit(f[1])?,
            pred: bit(f[2])?,
            score: f[3].parse().map_err(|_| parse_err(n, "bad score"))?,
        });
    }
    Ok(out)
}

pub fn metrics_csv(model: &str, report: &RunReport) -> String {
    let mut s = format!("{METRICS_HEADER}\n");
    for (i, m) in report.runs.iter().enumerate() {
        write!(s, "{model},{}", i + 1).unwrap();
        for v in m.values() {
            write!(s, ",{v}").unwrap();
        }
        s.push('\n');
    }
    let spread = |v: Option<f64>| v.map_or_else(|| "NA".to_owned(), |x| format!("{x:.6}"));
    for (tag, pick) in [("MEAN±STD", 0), ("MEAN±CI95", 1)] {
        write!(s, "{model},{tag}").unwrap();
        for st in &report.stats {
            let d = if pick == 0 { st.std } else { st.ci95 };
            write!(s, ",{:.6}±{}", st.mean, spread(d)).unwrap();
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricsRecord {
    Run {
        model: String,
        run: u32,
        metrics: Metrics,
    },
    /// `kind` is the run-column tag, e.g. `MEAN±STD`. Missing spreads are NaN.
    Aggregate {
        model: String,
        kind: String,
        means: [f64; 6],
        spreads: [f64; 6],
    },
}

pub fn parse_metrics_csv(text: &str) -> Result<Vec<MetricsRecord>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(METRICS_HEADER) {
        return Err(EvalError::Parse(format!("expected header `{METRICS_HEADER}`")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let n = i + 2;
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 2 + METRIC_NAMES.len() {
            return Err(parse_err(n, "expected 8 fields"));
        }
        let num = |s: &str| -> Result<f64> {
            if s == "NA" {
                Ok(f64::NAN)
            } else {
                s.parse().map_err(|_| parse_err(n, "bad number"))
            }
        };
        let model = f[0].to_owned();
        if let Ok(run) = f[1].parse::<u32>() {
            let mut v = [0.0; 6];
            for (slot, s) in v.iter_mut().zip(&f[2..]) {
                *slot = num(s)?;
            }
            out.push(MetricsRecord::Run { model, run, metrics: Metrics::from_values(v) });
        } else {
            let (mut means, mut spreads) = ([0.0; 6], [0.0; 6]);
            for (k, s) in f[2..].iter().enumerate() {
                let (m, d) = s.split_once('±').ok_or_else(|| parse_err(n, "aggregate cell needs `±`"))?;
                means[k] = num(m)?;
                spreads[k] = num(d)?;
            }
            out.push(MetricsRecord::Aggregate { model, kind: f[1].to_owned(), means, spreads });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::aggregate_runs;

    #[test]
    fn predictions_round_trip() {
        let rows = vec![
            PredictionRow { id: "a".into(), label: 1, pred: 1, score: 0.987654321 },
            PredictionRow { id: "b".into(), label: 0, pred: 1, score: 0.5 },
        ];
        let text = predictions_csv(&rows);
        assert!(text.starts_with("id,label,pred,score\na,1,1,0.987654321\n"));
        assert_eq!(parse_predictions_csv(&text).unwrap(), rows);
        assert!(parse_predictions_csv("id,label,pred,score\nx,2,1,0.5\n").is_err());
        assert!(parse_predictions_csv("wrong\n").is_err());
    }

    #[test]
    fn metrics_layout_and_parse() {
        let runs = [
            Metrics::from_values([0.96, 0.9, 0.8, 0.85, 0.1, 0.2]),
            Metrics::from_values([0.97, 0.9, 0.8, 0.85, 0.1, 0.2]),
        ];
        let report = aggregate_runs(&runs).unwrap();
        let text = metrics_csv("rf", &report);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], METRICS_HEADER);
        assert_eq!(lines[1], "rf,1,0.96,0.9,0.8,0.85,0.1,0.2");
        assert!(lines[3].starts_with("rf,MEAN±STD,0.965000±0.007071,0.900000±0.000000"));
        assert!(lines[4].starts_with("rf,MEAN±CI95,"));
        let parsed = parse_metrics_csv(&text).unwrap();
        assert_eq!(parsed.len(), 4);
        match &parsed[0] {
            MetricsRecord::Run { run, metrics, .. } => {
                assert_eq!(*run, 1);
                assert_eq!(metrics.values(), runs[0].values());
            }
            other => panic!("{other:?}"),
        }
        match &parsed[2] {
            MetricsRecord::Aggregate { kind, means, .. } => {
                assert_eq!(kind, "MEAN±STD");
                assert!((means[0] - 0.965).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_run_spread_is_na() {
        let report = aggregate_runs(&[Metrics::from_values([1.0; 6])]).unwrap();
        let text = metrics_csv("knn", &report);
        assert!(text.contains("1.000000±NA"));
        match &parse_metrics_csv(&text).unwrap()[1] {
            MetricsRecord::Aggregate { spreads, .. } => assert!(spreads[0].is_nan()),
            other => panic!("{other:?}"),
        }
    }
}
