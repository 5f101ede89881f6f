//! JSON-lines corpus catalog.
//!
//! The first line is `{"version":1,"seed":<u64>}`; every following line is a
//! sample object with keys `id, path, label, variant, len, split`.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{DatasetError, Result};
use crate::fsutil::write_atomic;

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Label {
    NonPacked = 0,
    Packed = 1,
}

impl Label {
    pub fn as_u8(self) -> u8 {
        self as u8
    }

    pub fn from_variant(variant: &str) -> Label {
        if variant.starts_with("tpk-") {
            Label::Packed
        } else {
            Label::NonPacked
        }
    }
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l as u8
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Label::NonPacked),
            1 => Ok(Label::Packed),
            _ => Err(format!("label must be 0 or 1, got {v}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
    Holdout,
    Unassigned,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
            Split::Holdout => "holdout",
            Split::Unassigned => "unassigned",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            "holdout" => Ok(Split::Holdout),
            "unassigned" => Ok(Split::Unassigned),
            _ => Err(format!("unknown split `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sample {
    pub id: String,
    /// Relative to the manifest's directory.
    pub path: String,
    pub label: Label,
    pub variant: String,
    pub len: u64,
    pub split: Split,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    version: u32,
    seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub version: u32,
    pub seed: u64,
    pub samples: Vec<Sample>,
}

impl Manifest {
    pub fn new(seed: u64) -> Self {
        Self { version: MANIFEST_VERSION, seed, samples: Vec::new() }
    }

    /// Checks id uniqueness and label/variant consistency.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for s in &self.samples {
            if !seen.insert(s.id.as_str()) {
                return Err(DatasetError::InvalidManifest(format!("duplicate id `{}`", s.id)));
            }
            if Label::from_variant(&s.variant) != s.label {
                return Err(DatasetError::InvalidManifest(format!(
                    "sample `{}`: label {} disagrees with variant `{}`",
                    s.id,
                    s.label.as_u8(),
                    s.variant
                )));
            }
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = serde_json::to_string(&Header { version: self.version, seed: self.seed })?;
        out.push('\n');
        for s in &self.samples {
            out.push_str(&serde_json::to_string(s)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Header =
            serde_json::from_str(lines.next().ok_or_else(|| DatasetError::InvalidManifest("empty manifest".into()))?)?;
        if header.version != MANIFEST_VERSION {
            return Err(DatasetError::InvalidManifest(format!("unsupported manifest version {}", header.version)));
        }
        let samples = lines.map(serde_json::from_str).collect::<std::result::Result<Vec<Sample>, _>>()?;
        let m = Self { version: header.version, seed: header.seed, samples };
        m.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_jsonl()?.as_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_jsonl(&std::fs::read_to_string(path)?)
    }

    pub fn in_split(&self, split: Split) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(move |s| s.split == split)
    }

    pub fn get(&self, id: &str) -> Option<&Sample> {
        self.samples.iter().find(|s| s.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(id: &str, variant: &str, split: Split) -> Sample {
        Sample {
            id: id.into(),
            path: format!("samples/{id}.bin"),
            label: Label::from_variant(variant),
            variant: variant.into(),
            len: 2048,
            split,
        }
    }

    #[test]
    fn jsonl_layout() {
        let mut m = Manifest::new(7);
        m.samples.push(sample("a", "tpk-A", Split::Train));
        let text = m.to_jsonl().unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), r#"{"version":1,"seed":7}"#);
        assert_eq!(
            lines.next().unwrap(),
            r#"{"id":"a","path":"samples/a.bin","label":1,"variant":"tpk-A","len":2048,"split":"train"}"#
        );
        assert_eq!(Manifest::from_jsonl(&text).unwrap(), m);
    }

    #[test]
    fn rejects_duplicates_and_mislabels() {
        let mut m = Manifest::new(1);
        m.samples.push(sample("a", "raw-code", Split::Test));
        m.samples.push(sample("a", "raw-text", Split::Test));
        assert!(m.validate().is_err());

        let mut m = Manifest::new(1);
        let mut s = sample("b", "raw-code", Split::Test);
        s.label = Label::Packed;
        m.samples.push(s);
        assert!(matches!(m.validate(), Err(DatasetError::InvalidManifest(_))));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Manifest::from_jsonl("").is_err());
        assert!(Manifest::from_jsonl(r#"{"version":2,"seed":1}"#).is_err());
        let bad_label = "{\"version\":1,\"seed\":1}\n{\"id\":\"a\",\"path\":\"p\",\"label\":3,\"variant\":\"x\",\"len\":1,\"split\":\"train\"}\n";
        assert!(Manifest::from_jsonl(bad_label).is_err());
    }
}
