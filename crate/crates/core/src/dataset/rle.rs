//! Byte-oriented run-length codec.
//!
//! * `0xFE` is the escape byte; a literal `0xFE` is written `FE 00`.
//! * A run of 4..=255 identical bytes is written `FE <count> <value>`.
//! * Longer runs are split greedily; leftovers shorter than 4 are literals.

use super::{DatasetError, Result};

const ESCAPE: u8 = 0xFE;
const MIN_RUN: usize = 4;
const MAX_RUN: usize = 255;

pub fn rle_encode(input: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(input.len() + input.len() / 16);
    let mut i = 0;
    while i < input.len() {
        let b = input[i];
        let run = input[i..].iter().take(MAX_RUN).take_while(|&&x| x == b).count();
        if run >= MIN_RUN {
            out.extend_from_slice(&[ESCAPE, run as u8, b]);
            i += run;
        } else {
            if b == ESCAPE {
                out.extend_from_slice(&[ESCAPE, 0]);
            } else {
                out.push(b);
            }
            i += 1;
        }
    }
    out
}

pub fn rle_decode(input: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(input.len());
    let mut it = input.iter().copied();
    while let Some(b) = it.next() {
        if b != ESCAPE {
            out.push(b);
            continue;
        }
        match it.next() {
            Some(0) => out.push(ESCAPE),
            Some(n) if n as usize >= MIN_RUN => {
                let v = it.next().ok_or_else(|| DatasetError::CorruptPacked("run missing value byte".into()))?;
                out.resize(out.len() + n as usize, v);
            }
            Some(n) => return Err(DatasetError::CorruptPacked(format!("invalid run length {n}"))),
            None => return Err(DatasetError::CorruptPacked("dangling escape byte".into())),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bit_exact_encodings() {
        assert_eq!(rle_encode(&[1, 2, 3]), vec![1, 2, 3]);
        assert_eq!(rle_encode(&[0xFE]), vec![0xFE, 0x00]);
        assert_eq!(rle_encode(&[7, 7, 7]), vec![7, 7, 7]);
        assert_eq!(rle_encode(&[7, 7, 7, 7]), vec![0xFE, 4, 7]);
        assert_eq!(rle_encode(&[0xFE; 5]), vec![0xFE, 5, 0xFE]);
        assert_eq!(rle_encode(&[0xFE; 2]), vec![0xFE, 0, 0xFE, 0]);
        let mut long = vec![0u8; 300];
        long.push(9);
        assert_eq!(rle_encode(&long), vec![0xFE, 255, 0, 0xFE, 45, 0, 9]);
        assert_eq!(rle_encode(&[0u8; 258]), vec![0xFE, 255, 0, 0, 0, 0]);
    }

    #[test]
    fn corrupt_streams() {
        assert!(rle_decode(&[0xFE]).is_err());
        assert!(rle_decode(&[0xFE, 2, 1]).is_err());
        assert!(rle_decode(&[0xFE, 9]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(data in prop::collection::vec(prop_oneof![Just(0u8), Just(0xFEu8), any::<u8>()], 0..3000)) {
            prop_assert_eq!(rle_decode(&rle_encode(&data)).unwrap(), data);
        }
    }
}
