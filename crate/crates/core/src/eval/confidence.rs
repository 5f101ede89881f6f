use std::fmt::Write as _;

use super::{EvalError, Result};

/// Ten equal-width buckets over [0, 1].
pub const DEFAULT_EDGES: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bucket {
    pub lo: f64,
    pub hi: f64,
    pub correct: u64,
    pub incorrect: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceReport {
    pub buckets: Vec<Bucket>,
    /// Rows whose score fell outside `[edges[0], edges[last]]`.
    pub unbucketed: u64,
}

impl ConfidenceReport {
    pub fn total(&self) -> u64 {
        self.buckets.iter().map(|b| b.correct + b.incorrect).sum()
    }

    /// `bucket_lo,bucket_hi,correct,incorrect`
    pub fn to_csv(&self) -> String {
        let mut s = String::from("bucket_lo,bucket_hi,correct,incorrect\n");
        for b in &self.buckets {
            writeln!(s, "{},{},{},{}", b.lo, b.hi, b.correct, b.incorrect).unwrap();
        }
        s
    }
}

/// Buckets `(label, score)` rows by score. Buckets are `[lo, hi)` except the
/// last, which is closed. A row is correct when `(score >= 0.5) == label`.
pub fn confidence_report(rows: &[(u8, f64)], edges: &[f64]) -> Result<ConfidenceReport> {
    if edges.len() < 2 || edges.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(EvalError::InvalidEdges);
    }
    let mut buckets: Vec<Bucket> =
        edges.windows(2).map(|w| Bucket { lo: w[0], hi: w[1], correct: 0, incorrect: 0 }).collect();
    let mut unbucketed = 0;
    let last = buckets.len() - 1;
    for &(label, score) in rows {
        if !(0.0..=1.0).contains(&score) {
            return Err(EvalError::ScoreOutOfRange(score));
        }
        if label > 1 {
            return Err(EvalError::NonBinaryValue(label));
        }
        let slot = buckets
            .iter()
            .position(|b| score >= b.lo && score < b.hi)
            .or_else(|| (score == buckets[last].hi).then_some(last));
        match slot {
            Some(i) => {
                if (score >= 0.5) == (label == 1) {
                    buckets[i].correct += 1;
                } else {
                    buckets[i].incorrect += 1;
                }
            }
            None => unbucketed += 1,
        }
    }
    Ok(ConfidenceReport { buckets, unbucketed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::XorShift64Star;

    #[test]
    fn single_row() {
        let r = confidence_report(&[(1, 0.95)], &[0.8, 0.9, 1.0]).unwrap();
        assert_eq!(r.buckets[0].correct + r.buckets[0].incorrect, 0);
        assert_eq!((r.buckets[1].correct, r.buckets[1].incorrect), (1, 0));
    }

    #[test]
    fn closed_last_bucket_and_outside() {
        let r = confidence_report(&[(1, 1.0), (0, 0.1)], &[0.5, 1.0]).unwrap();
        assert_eq!(r.buckets[0].correct, 1);
        assert_eq!(r.unbucketed, 1);
    }

    #[test]
    fn empty_rows() {
        let r = confidence_report(&[], &DEFAULT_EDGES).unwrap();
        assert_eq!(r.buckets.len(), 10);
        assert_eq!(r.total(), 0);
    }

    #[test]
    fn errors() {
        assert!(matches!(confidence_report(&[(1, 1.5)], &DEFAULT_EDGES), Err(EvalError::ScoreOutOfRange(_))));
        assert!(matches!(confidence_report(&[], &[0.5]), Err(EvalError::InvalidEdges)));
        assert!(matches!(confidence_report(&[], &[0.5, 0.5]), Err(EvalError::InvalidEdges)));
    }

    #[test]
    fn seeded_rows_match_per_row_tally() {
        let mut rng = XorShift64Star::new(500);
        let rows: Vec<(u8, f64)> = (0..500).map(|_| (rng.below(2) as u8, rng.next_f64())).collect();
        let r = confidence_report(&rows, &DEFAULT_EDGES).unwrap();
        assert_eq!(r.total(), 500);
        let mut tally = [[0u64; 2]; 10];
        for &(l, s) in &rows {
            let i = ((s * 10.0) as usize).min(9);
            let ok = (s >= 0.5) as u8 == l;
            tally[i][ok as usize] += 1;
        }
        for (b, t) in r.buckets.iter().zip(tally) {
            assert_eq!((b.incorrect, b.correct), (t[0], t[1]));
        }
        assert!(r.to_csv().starts_with("bucket_lo,bucket_hi,correct,incorrect\n0,0.1,"));
    }
}
