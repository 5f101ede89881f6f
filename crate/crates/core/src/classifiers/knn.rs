use super::{ClassifierError, Result};

/// Stores the standardized training set; scores are the fraction of the `k`
/// nearest neighbours labelled packed.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    pub k: usize,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

impl KnnModel {
    pub fn fit(rows: Vec<Vec<f64>>, labels: Vec<u8>, k: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(ClassifierError::EmptyTrainingSet);
        }
        if k == 0 || k > rows.len() {
            return Err(ClassifierError::KTooLarge { k, n: rows.len() });
        }
        Ok(Self { k, rows, labels })
    }

    /// Indices of the `k` nearest rows, ordered by (distance, index).
    pub fn neighbors(&self, x: &[f64]) -> Vec<usize> {
        let mut d: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), i))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        d.into_iter().take(self.k).map(|(_, i)| i).collect()
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        let votes = self.neighbors(x).into_iter().filter(|&i| self.labels[i] == 1).count();
        votes as f64 / self.k as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vote_fraction() {
        let m = KnnModel::fit(vec![vec![0.0], vec![1.0], vec![2.0], vec![10.0]], vec![0, 0, 1, 1], 3).unwrap();
        assert_eq!(m.neighbors(&[0.4]), vec![0, 1, 2]);
        assert!((m.score(&[0.4]) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn distance_ties_break_by_index() {
        let m = KnnModel::fit(vec![vec![1.0], vec![-1.0], vec![1.0]], vec![1, 0, 0], 2).unwrap();
        assert_eq!(m.neighbors(&[0.0]), vec![0, 1]);
    }

    #[test]
    fn bad_k() {
        assert!(matches!(KnnModel::fit(vec![vec![0.0]], vec![0], 2), Err(ClassifierError::KTooLarge { k: 2, n: 1 })));
        assert!(matches!(KnnModel::fit(vec![], vec![], 1), Err(ClassifierError::EmptyTrainingSet)));
    }
}
