use super::{ByteplotError, Result};

/// Shannon entropy of the byte-value histogram, in bits per byte.
pub fn shannon_entropy(bytes: &[u8]) -> Result<f64> {
    if bytes.is_empty() {
        return Err(ByteplotError::EmptyInput);
    }
    let mut counts = [0u64; 256];
    for &b in bytes {
        counts[b as usize] += 1;
    }
    let n = bytes.len() as f64;
    let h = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum::<f64>();
    // clamp -0.0 and rounding overshoot
    Ok(h.clamp(0.0, 8.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_symbol() {
        assert_eq!(shannon_entropy(&[0x41; 1024]).unwrap(), 0.0);
    }

    #[test]
    fn uniform() {
        let all: Vec<u8> = (0..=255).collect();
        assert!((shannon_entropy(&all).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn two_symbols() {
        assert!((shannon_entropy(&[0, 1, 0, 1]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty() {
        assert!(matches!(shannon_entropy(&[]), Err(ByteplotError::EmptyInput)));
    }

    proptest! {
        #[test]
        fn bounded_and_permutation_invariant(mut bytes in prop::collection::vec(any::<u8>(), 1..2000)) {
            let h = shannon_entropy(&bytes).unwrap();
            prop_assert!((0.0..=8.0).contains(&h));
            bytes.reverse();
            let k = bytes.len() / 3;
            bytes.rotate_left(k);
            prop_assert!((shannon_entropy(&bytes).unwrap() - h).abs() < 1e-12);
        }
    }
}
