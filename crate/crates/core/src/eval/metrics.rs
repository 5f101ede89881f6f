use super::{EvalError, Result};

/// Counts with Packed (1) as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, label: u8, pred: u8) -> Result<()> {
        match (label, pred) {
            (1, 1) => self.tp += 1,
            (0, 1) => self.fp += 1,
            (0, 0) => self.tn += 1,
            (1, 0) => self.fn_ += 1,
            (l, p) => return Err(EvalError::NonBinaryValue(if l > 1 { l } else { p })),
        }
        Ok(())
    }
}

/// Tallies `(label, prediction)` pairs.
pub fn confusion_from_predictions(rows: &[(u8, u8)]) -> Result<ConfusionMatrix> {
    if rows.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut cm = ConfusionMatrix::default();
    for &(label, pred) in rows {
        cm.record(label, pred)?;
    }
    Ok(cm)
}

/// Ratios whose denominator was zero. They are reported as 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Undefined {
    pub precision: bool,
    pub recall: bool,
    pub f1: bool,
    pub fpr: bool,
    pub fnr: bool,
}

impl Undefined {
    pub fn any(&self) -> bool {
        self.precision || self.recall || self.f1 || self.fpr || self.fnr
    }
}

pub const METRIC_NAMES: [&str; 6] = ["accuracy", "precision", "recall", "f1", "fpr", "fnr"];

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub fpr: f64,
    pub fnr: f64,
    pub undefined: Undefined,
}

impl Metrics {
    /// Values in [`METRIC_NAMES`] order.
    pub fn values(&self) -> [f64; 6] {
        [self.accuracy, self.precision, self.recall, self.f1, self.fpr, self.fnr]
    }

    pub fn from_values(v: [f64; 6]) -> Self {
        Self {
            accuracy: v[0],
            precision: v[1],
            recall: v[2],
            f1: v[3],
            fpr: v[4],
            fnr: v[5],
            undefined: Undefined::default(),
        }
    }
}

fn ratio(num: u64, den: u64, undefined: &mut bool) -> f64 {
    if den == 0 {
        *undefined = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn compute_metrics(cm: &ConfusionMatrix) -> Result<Metrics> {
    if cm.total() == 0 {
        return Err(EvalError::EmptyMatrix);
    }
    let mut u = Undefined::default();
    let accuracy = (cm.tp + cm.tn) as f64 / cm.total() as f64;
    let precision = ratio(cm.tp, cm.tp + cm.fp, &mut u.precision);
    let recall = ratio(cm.tp, cm.tp + cm.fn_, &mut u.recall);
    let fpr = ratio(cm.fp, cm.fp + cm.tn, &mut u.fpr);
    let fnr = ratio(cm.fn_, cm.fn_ + cm.tp, &mut u.fnr);
    let f1 = if u.precision || u.recall || precision + recall == 0.0 {
        u.f1 = true;
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Metrics { accuracy, precision, recall, f1, fpr, fnr, undefined: u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::XorShift64Star;
    use proptest::prelude::*;

    #[test]
    fn simple_tallies() {
        let cm = confusion_from_predictions(&[(1, 1), (0, 0)]).unwrap();
        assert_eq!(cm, ConfusionMatrix { tp: 1, fp: 0, tn: 1, fn_: 0 });
        let cm = confusion_from_predictions(&[(1, 0)]).unwrap();
        assert_eq!(cm, ConfusionMatrix { tp: 0, fp: 0, tn: 0, fn_: 1 });
        assert!(matches!(confusion_from_predictions(&[]), Err(EvalError::EmptyInput)));
        assert!(matches!(confusion_from_predictions(&[(2, 1)]), Err(EvalError::NonBinaryValue(2))));
    }

    #[test]
    fn seeded_rows_match_tally() {
        let mut rng = XorShift64Star::new(1000);
        let rows: Vec<(u8, u8)> = (0..1000).map(|_| (rng.below(2) as u8, rng.below(2) as u8)).collect();
        let cm = confusion_from_predictions(&rows).unwrap();
        let mut tally = [[0u64; 2]; 2];
        for &(l, p) in &rows {
            tally[l as usize][p as usize] += 1;
        }
        assert_eq!(cm, ConfusionMatrix { tp: tally[1][1], fp: tally[0][1], tn: tally[0][0], fn_: tally[1][0] });
    }

    #[test]
    fn densenet_run5_matrix() {
        let m = compute_metrics(&ConfusionMatrix { tp: 1360, fp: 38, tn: 1375, fn_: 53 }).unwrap();
        for (got, want) in [(m.accuracy, 0.968), (m.precision, 0.973), (m.recall, 0.962), (m.f1, 0.968)] {
            assert!((got - want).abs() <= 0.0005, "{got} vs {want}");
        }
        assert!(!m.undefined.any());
    }

    #[test]
    fn vgg16_run3_matrix_is_inconsistent_with_reported_f1() {
        // Reported F1 is 96.4%; the published counts give ~0.966.
        let m = compute_metrics(&ConfusionMatrix { tp: 1353, fp: 34, tn: 1379, fn_: 60 }).unwrap();
        assert!((m.f1 - 0.9664).abs() < 0.0005);
        assert!((m.accuracy - 0.967).abs() < 0.0005);
    }

    #[test]
    fn perfect() {
        let m = compute_metrics(&ConfusionMatrix { tp: 50, fp: 0, tn: 50, fn_: 0 }).unwrap();
        assert_eq!([m.accuracy, m.precision, m.recall, m.f1], [1.0; 4]);
        assert_eq!((m.fpr, m.fnr), (0.0, 0.0));
    }

    #[test]
    fn zero_denominators() {
        let m = compute_metrics(&ConfusionMatrix { tp: 0, fp: 0, tn: 10, fn_: 5 }).unwrap();
        assert!(m.undefined.precision);
        assert_eq!(m.precision, 0.0);
        assert_eq!(m.recall, 0.0);
        assert_eq!(m.fnr, 1.0);
        assert!(m.undefined.f1);
        assert!(matches!(compute_metrics(&ConfusionMatrix::default()), Err(EvalError::EmptyMatrix)));
    }

    fn rows() -> impl Strategy<Value = Vec<(u8, u8)>> {
        prop::collection::vec((0u8..2, 0u8..2), 1..300)
    }

    proptest! {
        #[test]
        fn identities_and_bounds(tp in 0u64..500, fp in 0u64..500, tn in 0u64..500, fn_ in 0u64..500) {
            let cm = ConfusionMatrix { tp, fp, tn, fn_ };
            prop_assume!(cm.total() > 0);
            let m = compute_metrics(&cm).unwrap();
            if !m.undefined.recall {
                prop_assert!((m.fnr - (1.0 - m.recall)).abs() < 1e-12);
            }
            if !m.undefined.fpr {
                prop_assert!((m.fpr - (1.0 - tn as f64 / (tn + fp) as f64)).abs() < 1e-12);
            }
            if !m.undefined.f1 && m.precision > 0.0 && m.recall > 0.0 {
                prop_assert!(m.f1 >= m.precision.min(m.recall) - 1e-12);
                prop_assert!(m.f1 <= m.precision.max(m.recall) + 1e-12);
            }
            prop_assert!(m.values().iter().all(|v| (0.0..=1.0).contains(v)));
        }

        #[test]
        fn permutation_invariant(mut r in rows(), seed in any::<u64>()) {
            let a = compute_metrics(&confusion_from_predictions(&r).unwrap()).unwrap();
            XorShift64Star::new(seed).shuffle(&mut r);
            let b = compute_metrics(&confusion_from_predictions(&r).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn reconstruction(r in rows()) {
            let m = compute_metrics(&confusion_from_predictions(&r).unwrap()).unwrap();
            let n = r.len() as f64;
            let correct = r.iter().filter(|(l, p)| l == p).count() as f64;
            prop_assert!((m.accuracy - correct / n).abs() < 1e-12);
            let pos_pred = r.iter().filter(|(_, p)| *p == 1).count();
            let true_pos = r.iter().filter(|(l, p)| *l == 1 && *p == 1).count();
            let pos = r.iter().filter(|(l, _)| *l == 1).count();
            if pos_pred > 0 {
                prop_assert!((m.precision - true_pos as f64 / pos_pred as f64).abs() < 1e-12);
            }
            if pos > 0 {
                prop_assert!((m.recall - true_pos as f64 / pos as f64).abs() < 1e-12);
            }
        }
    }
}
