//! Feature table persistence.
//!
//! CSV: `id,label,<feature columns>` with values in 9 significant digits.
//!
//! Archive (little-endian):
//!
//! ```text
//! b"PSFA" | u16 version = 1 | u32 rows | u16 features
//! rows x (u32 id byte length | id UTF-8 bytes)
//! rows x features x f64
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{GaborError, Result};

pub const ARCHIVE_MAGIC: &[u8; 4] = b"PSFA";
pub const ARCHIVE_VERSION: u16 = 1;

/// Feature rows keyed by sample id, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    ids: Vec<String>,
    dim: usize,
    values: Vec<f64>,
}

impl FeatureTable {
    pub fn new(dim: usize) -> Self {
        Self { ids: Vec::new(), dim, values: Vec::new() }
    }

    pub fn push(&mut self, id: impl Into<String>, row: &[f64]) -> Result<()> {
        if row.len() != self.dim {
            return Err(GaborError::Format(format!("row has {} values, table expects {}", row.len(), self.dim)));
        }
        self.ids.push(id.into());
        self.values.extend_from_slice(row);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.ids.iter().map(String::as_str).zip(self.values.chunks(self.dim.max(1)))
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn to_archive_bytes(&self) -> Result<Vec<u8>> {
        let rows = u32::try_from(self.len()).map_err(|_| GaborError::Format("too many rows".into()))?;
        let dim = u16::try_from(self.dim).map_err(|_| GaborError::Format("too many features".into()))?;
        let mut out = Vec::with_capacity(12 + self.values.len() * 8);
        out.extend_from_slice(ARCHIVE_MAGIC);
        out.extend_from_slice(&ARCHIVE_VERSION.to_le_bytes());
        out.extend_from_slice(&rows.to_le_bytes());
        out.extend_from_slice(&dim.to_le_bytes());
        for id in &self.ids {
            out.extend_from_slice(&(id.len() as u32).to_le_bytes());
            out.extend_from_slice(id.as_bytes());
        }
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        Ok(out)
    }

    pub fn from_archive_bytes(data: &[u8]) -> Result<Self> {
        let mut cur = Cursor { data, pos: 0 };
        if cur.take(4)? != ARCHIVE_MAGIC {
            return Err(GaborError::Format("bad archive magic".into()));
        }
        let version = cur.u16()?;
        if version != ARCHIVE_VERSION {
            return Err(GaborError::Format(format!("unsupported archive version {version}")));
        }
        let rows = cur.u32()? as usize;
        let dim = cur.u16()? as usize;
        let mut ids = Vec::with_capacity(rows);
        for _ in 0..rows {
            let len = cur.u32()? as usize;
            let id = std::str::from_utf8(cur.take(len)?).map_err(|_| GaborError::Format("id is not UTF-8".into()))?;
            ids.push(id.to_owned());
        }
        let mut values = Vec::with_capacity(rows * dim);
        for _ in 0..rows * dim {
            values.push(f64::from_le_bytes(cur.take(8)?.try_into().unwrap()));
        }
        if cur.pos != data.len() {
            return Err(GaborError::Format("trailing bytes after archive".into()));
        }
        Ok(Self { ids, dim, values })
    }

    /// CSV text; `labels[i]` belongs to row `i`.
    pub fn to_csv(&self, labels: &[u8], names: &[String]) -> Result<String> {
        if labels.len() != self.len() || names.len() != self.dim {
            return Err(GaborError::Format("label or column count does not match table".into()));
        }
        let mut s = String::from("id,label");
        for n in names {
            s.push(',');
            s.push_str(n);
        }
        s.push('\n');
        for ((id, row), label) in self.rows().zip(labels) {
            write!(s, "{id},{label}").unwrap();
            for v in row {
                write!(s, ",{v:.8e}").unwrap();
            }
            s.push('\n');
        }
        Ok(s)
    }

    /// Parses CSV text back into a table plus the label column.
    pub fn from_csv(text: &str) -> Result<(Self, Vec<u8>)> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| GaborError::Format("empty CSV".into()))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 2 || cols[0] != "id" || cols[1] != "label" {
            return Err(GaborError::Format("CSV header must start with `id,label`".into()));
        }
        let mut table = Self::new(cols.len() - 2);
        let mut labels = Vec::new();
        for (n, line) in lines.enumerate().filter(|(_, l)| !l.is_empty()) {
            let bad = |what: &str| GaborError::Format(format!("line {}: {what}", n + 2));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols.len() {
                return Err(bad("wrong field count"));
            }
            labels.push(fields[1].parse().map_err(|_| bad("bad label"))?);
            let row = fields[2..]
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad("bad number"))?;
            table.push(fields[0], &row)?;
        }
        Ok((table, labels))
    }
}

/// Loads a table from either format, detected by the archive magic.
/// Labels are only present for CSV input.
pub fn read_features(path: &Path) -> Result<(FeatureTable, Option<Vec<u8>>)> {
    let data = std::fs::read(path)?;
    if data.starts_with(ARCHIVE_MAGIC) {
        return Ok((FeatureTable::from_archive_bytes(&data)?, None));
    }
    let text = std::str::from_utf8(&data).map_err(|_| GaborError::Format("not UTF-8".into()))?;
    let (t, l) = FeatureTable::from_csv(text)?;
    Ok((t, Some(l)))
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len());
        let end = end.ok_or_else(|| GaborError::Format("truncated archive".into()))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::GaborBank;
    use proptest::prelude::*;

    fn sample() -> FeatureTable {
        let mut t = FeatureTable::new(3);
        t.push("a", &[1.0, -2.5, 1e-12]).unwrap();
        t.push("bb", &[0.0, 123456.789, f64::MIN_POSITIVE]).unwrap();
        t
    }

    #[test]
    fn archive_header_layout() {
        let bytes = sample().to_archive_bytes().unwrap();
        assert_eq!(&bytes[..4], b"PSFA");
        assert_eq!(&bytes[4..6], &[1, 0]);
        assert_eq!(&bytes[6..10], &[2, 0, 0, 0]);
        assert_eq!(&bytes[10..12], &[3, 0]);
        assert_eq!(&bytes[12..16], &[1, 0, 0, 0]);
        assert_eq!(bytes[16], b'a');
        assert_eq!(bytes.len(), 12 + 5 + 6 + 6 * 8);
    }

    #[test]
    fn archive_rejects_corruption() {
        let bytes = sample().to_archive_bytes().unwrap();
        assert!(FeatureTable::from_archive_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(FeatureTable::from_archive_bytes(&bad).is_err());
        let mut extra = bytes;
        extra.push(0);
        assert!(FeatureTable::from_archive_bytes(&extra).is_err());
    }

    #[test]
    fn csv_header_and_precision() {
        let bank = GaborBank::default();
        let mut t = FeatureTable::new(24);
        t.push("x", &[1.0 / 3.0; 24]).unwrap();
        let csv = t.to_csv(&[1], &bank.feature_names()).unwrap();
        let header = csv.lines().next().unwrap();
        assert!(header.starts_with("id,label,g_f0_o0_mean,g_f0_o0_var,g_f0_o1_mean"));
        assert!(header.ends_with("g_f2_o3_mean,g_f2_o3_var"));
        let row = csv.lines().nth(1).unwrap();
        assert!(row.starts_with("x,1,3.33333333e-1,"));
        let (back, labels) = FeatureTable::from_csv(&csv).unwrap();
        assert_eq!(labels, vec![1]);
        assert!((back.row(0)[0] - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn empty_table_round_trips() {
        let t = FeatureTable::new(24);
        assert_eq!(FeatureTable::from_archive_bytes(&t.to_archive_bytes().unwrap()).unwrap(), t);
    }

    proptest! {
        #[test]
        fn archive_round_trip(rows in prop::collection::vec(("[a-z0-9_-]{1,12}", prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 4)), 0..20)) {
            let mut t = FeatureTable::new(4);
            for (id, r) in &rows {
                t.push(id.clone(), r).unwrap();
            }
            let back = FeatureTable::from_archive_bytes(&t.to_archive_bytes().unwrap()).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}
