use std::fmt;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use super::{EvalError, Result};

pub const EPOCH_LOG_HEADER: &str = "run,epoch,split,loss,accuracy,f1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpochSplit {
    Train,
    Val,
}

impl fmt::Display for EpochSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpochSplit::Train => "train",
            EpochSplit::Val => "val",
        })
    }
}

impl FromStr for EpochSplit {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(EpochSplit::Train),
            "val" => Ok(EpochSplit::Val),
            _ => Err(EvalError::Parse(format!("unknown epoch split `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub run: u32,
    pub epoch: u32,
    pub split: EpochSplit,
    pub loss: f64,
    pub accuracy: f64,
    pub f1: f64,
}

/// Appends one row, writing the header first if the file is new or empty.
/// Single writer per file.
pub fn epoch_log_append(path: &Path, rec: &EpochRecord) -> Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut line = String::new();
    if f.metadata()?.len() == 0 {
        line.push_str(EPOCH_LOG_HEADER);
        line.push('\n');
    }
    line.push_str(&format!("{},{},{},{},{},{}\n", rec.run, rec.epoch, rec.split, rec.loss, rec.accuracy, rec.f1));
    f.write_all(line.as_bytes())?;
    Ok(())
}

pub fn read_epoch_log(path: &Path) -> Result<Vec<EpochRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(EPOCH_LOG_HEADER) {
        return Err(EvalError::Parse("missing epoch-log header".into()));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 6 {
                return Err(EvalError::Parse(format!("bad epoch-log row `{l}`")));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| EvalError::Parse(format!("bad number `{s}`")));
            let int = |s: &str| s.parse::<u32>().map_err(|_| EvalError::Parse(format!("bad integer `{s}`")));
            Ok(EpochRecord {
                run: int(f[0])?,
                epoch: int(f[1])?,
                split: f[2].parse()?,
                loss: num(f[3])?,
                accuracy: num(f[4])?,
                f1: num(f[5])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_and_replay() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("log.csv");
        let a = EpochRecord { run: 1, epoch: 1, split: EpochSplit::Train, loss: 0.6875, accuracy: 0.5, f1: 0.1 / 3.0 };
        let b = EpochRecord { split: EpochSplit::Val, loss: 0.25, ..a };
        epoch_log_append(&p, &a).unwrap();
        epoch_log_append(&p, &b).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next().unwrap(), EPOCH_LOG_HEADER);
        assert_eq!(read_epoch_log(&p).unwrap(), vec![a, b]);
    }

    #[test]
    fn ten_epochs_give_twenty_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("log.csv");
        for epoch in 1..=10 {
            for split in [EpochSplit::Train, EpochSplit::Val] {
                let r = EpochRecord { run: 1, epoch, split, loss: 1.0 / epoch as f64, accuracy: 0.9, f1: 0.9 };
                epoch_log_append(&p, &r).unwrap();
            }
        }
        assert_eq!(read_epoch_log(&p).unwrap().len(), 20);
    }

    #[test]
    fn rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "nope\n").unwrap();
        assert!(read_epoch_log(&p).is_err());
        std::fs::write(&p, format!("{EPOCH_LOG_HEADER}\n1,1,test,0,0,0\n")).unwrap();
        assert!(read_epoch_log(&p).is_err());
    }
}
