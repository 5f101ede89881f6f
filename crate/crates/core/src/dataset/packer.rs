//! Toy packer emulating a packed executable's stub-plus-payload layout.
//!
//! Header (22 bytes):
//!
//! ```text
//! magic "TPKA"|"TPKB"|"TPKC" | 0x00 | u8 variant code (1..=3)
//! u64 LE original payload length | 8-byte key
//! ```
//!
//! Body:
//! * A: `payload ^ keystream`
//! * B: `rle(payload) ^ keystream`
//! * C: `rle(payload) ^ rotl3(keystream)`; each keystream byte is rotated
//!   left by 3 bits before the XOR.
//!
//! The keystream is [`XorShift64Star`] seeded with the key read as a LE u64,
//! emitting each 64-bit output least-significant byte first.

use std::fmt;
use std::str::FromStr;

use super::rle::{rle_decode, rle_encode};
use super::{DatasetError, Result};
use crate::rng::XorShift64Star;

pub const HEADER_LEN: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PackVariant {
    A,
    B,
    C,
}

impl PackVariant {
    pub const ALL: [PackVariant; 3] = [PackVariant::A, PackVariant::B, PackVariant::C];

    pub fn code(self) -> u8 {
        match self {
            PackVariant::A => 1,
            PackVariant::B => 2,
            PackVariant::C => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.code() == code)
    }

    pub fn magic(self) -> [u8; 4] {
        match self {
            PackVariant::A => *b"TPKA",
            PackVariant::B => *b"TPKB",
            PackVariant::C => *b"TPKC",
        }
    }

    pub fn variant_tag(self) -> &'static str {
        match self {
            PackVariant::A => "tpk-A",
            PackVariant::B => "tpk-B",
            PackVariant::C => "tpk-C",
        }
    }
}

impl fmt::Display for PackVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.variant_tag())
    }
}

impl FromStr for PackVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|v| v.variant_tag() == s || &v.variant_tag()[4..] == s)
            .ok_or_else(|| format!("unknown pack variant `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackSpec {
    pub variant: PackVariant,
    pub key: [u8; 8],
}

impl PackSpec {
    /// Spec with a key drawn from the `pack-key` sub-stream of `seed`.
    pub fn from_seed(variant: PackVariant, seed: u64) -> Self {
        let key = XorShift64Star::substream(seed, "pack-key").next_u64().to_le_bytes();
        Self { variant, key }
    }
}

fn apply_keystream(data: &mut [u8], key: [u8; 8], rotate: bool) {
    let mut rng = XorShift64Star::new(u64::from_le_bytes(key));
    let mut ks = vec![0u8; data.len()];
    rng.fill_bytes(&mut ks);
    for (d, k) in data.iter_mut().zip(ks) {
        *d ^= if rotate { k.rotate_left(3) } else { k };
    }
}

pub fn toy_pack(payload: &[u8], spec: &PackSpec) -> Result<Vec<u8>> {
    if payload.is_empty() {
        return Err(DatasetError::EmptyPayload);
    }
    let mut body = match spec.variant {
        PackVariant::A => payload.to_vec(),
        PackVariant::B | PackVariant::C => rle_encode(payload),
    };
    apply_keystream(&mut body, spec.key, spec.variant == PackVariant::C);

    let mut out = Vec::with_capacity(HEADER_LEN + body.len());
    out.extend_from_slice(&spec.variant.magic());
    out.push(0);
    out.push(spec.variant.code());
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(&spec.key);
    out.extend_from_slice(&body);
    Ok(out)
}

/// Inverse of [`toy_pack`]; validates header and decoded length.
pub fn toy_unpack(data: &[u8]) -> Result<Vec<u8>> {
    let corrupt = |m: &str| DatasetError::CorruptPacked(m.to_owned());
    if data.len() < HEADER_LEN {
        return Err(corrupt("shorter than header"));
    }
    let variant = PackVariant::from_code(data[5]).ok_or_else(|| corrupt("unknown variant code"))?;
    if data[..4] != variant.magic() || data[4] != 0 {
        return Err(corrupt("magic does not match variant"));
    }
    let len = u64::from_le_bytes(data[6..14].try_into().unwrap()) as usize;
    let key: [u8; 8] = data[14..22].try_into().unwrap();
    let mut body = data[HEADER_LEN..].to_vec();
    apply_keystream(&mut body, key, variant == PackVariant::C);
    let payload = match variant {
        PackVariant::A => body,
        PackVariant::B | PackVariant::C => rle_decode(&body)?,
    };
    if payload.len() != len {
        return Err(corrupt("decoded length does not match header"));
    }
    Ok(payload)
}
