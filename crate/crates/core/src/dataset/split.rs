use serde::{Deserialize, Serialize};

use super::{DatasetError, Label, Manifest, Result, Split};
use crate::rng::XorShift64Star;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitFractions {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl Default for SplitFractions {
    fn default() -> Self {
        Self { train: 0.70, val: 0.15, test: 0.15 }
    }
}

impl SplitFractions {
    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.val, self.test];
        if parts.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(DatasetError::InvalidFractions(format!("{parts:?} must each lie in [0, 1]")));
        }
        if (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(DatasetError::InvalidFractions(format!("{parts:?} must sum to 1")));
        }
        Ok(())
    }

    /// Largest-remainder apportionment of `n` items; each count is within 1
    /// of `n * fraction`. Remainder ties go to the earlier split.
    pub fn apportion(&self, n: usize) -> [usize; 3] {
        let quotas = [self.train, self.val, self.test].map(|f| n as f64 * f);
        let mut counts = quotas.map(|q| q.floor() as usize);
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| {
            let ra = quotas[a] - quotas[a].floor();
            let rb = quotas[b] - quotas[b].floor();
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        let assigned: usize = counts.iter().sum();
        for &i in order.iter().take(n.saturating_sub(assigned)) {
            counts[i] += 1;
        }
        counts
    }
}

/// Stratified train/val/test assignment of every non-holdout sample.
///
/// Each class is shuffled with its own sub-stream and cut according to
/// [`SplitFractions::apportion`]. Holdout samples are left untouched.
pub fn stratified_split(manifest: &Manifest, fractions: SplitFractions, seed: u64) -> Result<Manifest> {
    fractions.validate()?;
    let mut out = manifest.clone();
    for label in [Label::NonPacked, Label::Packed] {
        let mut idx: Vec<usize> = out
            .samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.split != Split::Holdout && s.label == label)
            .map(|(i, _)| i)
            .collect();
        if idx.len() < 3 {
            return Err(DatasetError::ClassTooSmall { label: label.as_u8(), count: idx.len() });
        }
        XorShift64Star::substream(seed, &format!("split/{}", label.as_u8())).shuffle(&mut idx);
        let [n_train, n_val, _] = fractions.apportion(idx.len());
        for (pos, &i) in idx.iter().enumerate() {
            out.samples[i].split = if pos < n_train {
                Split::Train
            } else if pos < n_train + n_val {
                Split::Val
            } else {
                Split::Test
            };
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Sample;
    use proptest::prelude::*;

    fn manifest(packed: usize, non_packed: usize, holdout: usize) -> Manifest {
        let mut m = Manifest::new(0);
        let mut push = |variant: &str, n: usize, split: Split| {
            for i in 0..n {
                m.samples.push(Sample {
                    id: format!("{variant}-{i}"),
                    path: String::new(),
                    label: Label::from_variant(variant),
                    variant: variant.into(),
                    len: 1,
                    split,
                });
            }
        };
        push("tpk-A", packed, Split::Unassigned);
        push("raw-code", non_packed, Split::Unassigned);
        push("tpk-C", holdout, Split::Holdout);
        m
    }

    fn counts(m: &Manifest, label: Label) -> [usize; 3] {
        let c = |sp| m.samples.iter().filter(|s| s.label == label && s.split == sp).count();
        [c(Split::Train), c(Split::Val), c(Split::Test)]
    }

    #[test]
    fn divisible_case_exact() {
        let m = stratified_split(&manifest(100, 100, 0), SplitFractions::default(), 1).unwrap();
        assert_eq!(counts(&m, Label::Packed), [70, 15, 15]);
        assert_eq!(counts(&m, Label::NonPacked), [70, 15, 15]);
    }

    #[test]
    fn rounding_case() {
        let m = stratified_split(&manifest(101, 101, 0), SplitFractions::default(), 1).unwrap();
        for label in [Label::Packed, Label::NonPacked] {
            let c = counts(&m, label);
            assert_eq!(c.iter().sum::<usize>(), 101);
            for (got, want) in c.iter().zip([70.7, 15.15, 15.15]) {
                assert!((*got as f64 - want).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn deterministic_and_holdout_isolated() {
        let base = manifest(40, 30, 10);
        let a = stratified_split(&base, SplitFractions::default(), 9).unwrap();
        let b = stratified_split(&base, SplitFractions::default(), 9).unwrap();
        assert_eq!(a, b);
        let c = stratified_split(&base, SplitFractions::default(), 10).unwrap();
        assert_ne!(a, c);
        assert!(a.samples.iter().filter(|s| s.variant == "tpk-C").all(|s| s.split == Split::Holdout));
        assert!(a.samples.iter().all(|s| s.split != Split::Unassigned));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            stratified_split(&manifest(2, 10, 0), SplitFractions::default(), 1),
            Err(DatasetError::ClassTooSmall { label: 1, count: 2 })
        ));
        let bad = SplitFractions { train: 0.7, val: 0.2, test: 0.2 };
        assert!(stratified_split(&manifest(10, 10, 0), bad, 1).is_err());
    }

    proptest! {
        #[test]
        fn apportion_within_one(n in 0usize..5000, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (t, v) = (a, (1.0 - a) * b);
            let f = SplitFractions { train: t, val: v, test: 1.0 - t - v };
            let c = f.apportion(n);
            prop_assert_eq!(c.iter().sum::<usize>(), n);
            for (got, frac) in c.iter().zip([f.train, f.val, f.test]) {
                prop_assert!((*got as f64 - n as f64 * frac).abs() <= 1.0 + 1e-9);
            }
        }

        #[test]
        fn split_disjoint_cover(p in 3usize..60, q in 3usize..60, h in 0usize..10, seed in any::<u64>()) {
            let m = stratified_split(&manifest(p, q, h), SplitFractions::default(), seed).unwrap();
            let assigned = m.samples.iter().filter(|s| matches!(s.split, Split::Train | Split::Val | Split::Test)).count();
            prop_assert_eq!(assigned, p + q);
            for (label, n) in [(Label::Packed, p), (Label::NonPacked, q)] {
                let c = counts(&m, label);
                for (got, frac) in c.iter().zip([0.70, 0.15, 0.15]) {
                    prop_assert!((*got as f64 - n as f64 * frac).abs() <= 1.0 + 1e-9);
                }
            }
        }
    }
}
