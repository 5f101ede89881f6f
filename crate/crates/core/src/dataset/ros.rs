use super::{DatasetError, Manifest, Result, Split};
use crate::rng::XorShift64Star;

/// Random over-sampling as row indices: every original row in order, then
/// minority-class duplicates drawn with replacement until both classes have
/// the majority count. Labels must be 0 or 1.
pub fn oversample_indices(labels: &[u8], seed: u64) -> Result<Vec<usize>> {
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &l) in labels.iter().enumerate() {
        match l {
            0 | 1 => by_class[l as usize].push(i),
            _ => return Err(DatasetError::InvalidManifest(format!("label {l} at row {i} is not binary"))),
        }
    }
    if by_class.iter().any(Vec::is_empty) {
        return Err(DatasetError::SingleClassInput);
    }
    let (minority, majority) =
        if by_class[0].len() < by_class[1].len() { (&by_class[0], &by_class[1]) } else { (&by_class[1], &by_class[0]) };
    let deficit = majority.len() - minority.len();
    let mut rng = XorShift64Star::substream(seed, "ros");
    let mut out: Vec<usize> = (0..labels.len()).collect();
    out.extend((0..deficit).map(|_| minority[rng.below_usize(minority.len())]));
    Ok(out)
}

/// Materialised form of [`oversample_indices`].
pub fn random_oversample<T: Clone>(rows: &[T], labels: &[u8], seed: u64) -> Result<(Vec<T>, Vec<u8>)> {
    assert_eq!(rows.len(), labels.len(), "rows and labels must align");
    let idx = oversample_indices(labels, seed)?;
    Ok((idx.iter().map(|&i| rows[i].clone()).collect(), idx.iter().map(|&i| labels[i]).collect()))
}

/// One id per line, written next to the manifest by corpus generation.
pub const BALANCED_TRAIN_FILE: &str = "train_balanced.txt";

/// Train-split ids after over-sampling with the manifest seed: train samples
/// in manifest order, then the duplicates.
pub fn balanced_train_ids(manifest: &Manifest) -> Result<Vec<String>> {
    let train: Vec<_> = manifest.in_split(Split::Train).collect();
    let labels: Vec<u8> = train.iter().map(|s| s.label.as_u8()).collect();
    let idx = oversample_indices(&labels, manifest.seed)?;
    Ok(idx.into_iter().map(|i| train[i].id.clone()).collect())
}
