//! Pinned byte-frequency tables for the synthetic generators.
//!
//! Weights are in units of 2^-20 and each table sums to exactly `1 << 20`.

pub(crate) const TABLE_TOTAL: u32 = 1 << 20;

/// Opcode values carrying 40% of the code-like mass (Zipf-weighted in this order).
#[cfg(test)]
pub(crate) const OPCODES: [u8; 16] =
    [0x8B, 0x89, 0xE8, 0x48, 0x83, 0x00, 0xFF, 0x0F, 0x85, 0x74, 0xC3, 0x50, 0x55, 0x5D, 0xEB, 0x8D];

/// Code-like distribution: 40% on `OPCODES`, 40% on the 64 lowest remaining values
/// (Zipf-weighted), 20% spread evenly over the other 176 values.
pub(crate) const CODE_WEIGHTS: [u32; 256] = [
    20677, 88416, 44207, 29472, 22104, 17683, 14736, 12631, 11052, 9824, 8841, 8038, 7368, 6801, 6315, 15508, 5894,
    5526, 5201, 4912, 4653, 4421, 4210, 4019, 3844, 3684, 3537, 3401, 3275, 3158, 3049, 2947, 2852, 2763, 2679, 2600,
    2526, 2456, 2390, 2327, 2267, 2210, 2156, 2105, 2056, 2009, 1965, 1922, 1881, 1842, 1804, 1768, 1734, 1700, 1668,
    1637, 1608, 1579, 1551, 1524, 1499, 1474, 1449, 1426, 1403, 1381, 1192, 1192, 1192, 1192, 1192, 1192, 31016, 1192,
    1192, 1192, 1192, 1192, 1192, 1192, 10339, 1192, 1192, 1192, 1192, 9543, 1192, 1192, 1192, 1192, 1192, 1192, 1192,
    8862, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192,
    1192, 1192, 1192, 1192, 12406, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192,
    24813, 1192, 13785, 1192, 1192, 1192, 62032, 1192, 124066, 1192, 7754, 1192, 1192, 1192, 1192, 1192, 1192, 1192,
    1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192,
    1192, 1192, 1192, 1192, 1192, 1192, 1192, 1192, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191,
    1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 11279, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191,
    1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191,
    1191, 1191, 1191, 1191, 1191, 1191, 1191, 41355, 1191, 1191, 8271, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191,
    1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 1191, 17724,
];

/// Text-like distribution, English letter frequencies plus whitespace and punctuation.
/// Only values in `0x09..=0x7E` carry weight.
pub(crate) const TEXT_WEIGHTS: [u32; 256] = [
    0, 0, 0, 0, 0, 0, 0, 0, 0, 2807, 16843, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 168475, 93,
    1871, 93, 93, 93, 93, 1871, 935, 935, 93, 93, 9357, 1871, 10293, 748, 1310, 1310, 1310, 1310, 1310, 1310, 1310,
    1310, 1310, 1310, 935, 748, 93, 748, 93, 93, 93, 5052, 935, 1684, 2620, 7766, 1403, 1216, 3742, 4397, 187, 467,
    2432, 1497, 4304, 4772, 1122, 187, 3742, 3930, 5614, 1684, 561, 1403, 187, 1216, 187, 93, 93, 93, 93, 748, 93,
    60822, 11228, 20586, 31814, 93572, 16843, 14971, 45850, 53336, 1122, 5614, 29943, 18714, 52400, 58015, 14035, 748,
    44914, 47722, 67372, 20586, 7485, 17778, 1122, 14971, 561, 93, 93, 93, 93, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
    0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
    0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
    0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
    0, 0,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_and_group_masses() {
        assert_eq!(CODE_WEIGHTS.iter().sum::<u32>(), TABLE_TOTAL);
        assert_eq!(TEXT_WEIGHTS.iter().sum::<u32>(), TABLE_TOTAL);
        let opcode_mass: u32 = OPCODES.iter().map(|&b| CODE_WEIGHTS[b as usize]).sum();
        assert_eq!(opcode_mass, (TABLE_TOTAL as f64 * 0.4) as u32);
        let operands: Vec<usize> = (0..256).filter(|b| !OPCODES.contains(&(*b as u8))).take(64).collect();
        let operand_mass: u32 = operands.iter().map(|&b| CODE_WEIGHTS[b]).sum();
        assert_eq!(operand_mass, (TABLE_TOTAL as f64 * 0.4) as u32);
        assert!(CODE_WEIGHTS.iter().all(|&w| w > 0));
        assert!(TEXT_WEIGHTS.iter().enumerate().all(|(b, &w)| w == 0 || (0x09..=0x7E).contains(&b)));
    }
}
