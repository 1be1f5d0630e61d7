//! Line-delimited JSON checkpoints for long enumerations.
//!
//! Each line records one finished work unit:
//!
//! ```text
//! {"base":10,"range_lo":0,"range_hi":101,"primes":25,"counts":{"14":7}}
//! ```
//!
//! A run that is killed mid-write leaves at most one unterminated final line,
//! which is ignored on load. Any other malformed line is an error.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::enumerate::RangeTally;
use crate::error::{Result, SandError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeRecord {
    pub base: u32,
    pub range_lo: u64,
    pub range_hi: u64,
    pub primes: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl RangeRecord {
    pub fn from_tally(base: u32, t: &RangeTally) -> Self {
        RangeRecord {
            base,
            range_lo: t.lo,
            range_hi: t.hi,
            primes: t.primes,
            counts: t.counts.clone(),
        }
    }

    pub fn to_tally(&self) -> RangeTally {
        RangeTally {
            lo: self.range_lo,
            hi: self.range_hi,
            primes: self.primes,
            counts: self.counts.clone(),
        }
    }
}

pub fn read_records(path: &Path) -> Result<Vec<RangeRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    let mut lines = reader.split(b'\n').peekable();
    let mut line_no = 0;
    let raw = std::fs::metadata(path)?.len();
    let ends_with_newline = raw == 0 || {
        use std::io::{Read, Seek, SeekFrom};
        let mut f = File::open(path)?;
        f.seek(SeekFrom::End(-1))?;
        let mut last = [0u8; 1];
        f.read_exact(&mut last)?;
        last[0] == b'\n'
    };
    while let Some(line) = lines.next() {
        line_no += 1;
        let line = line?;
        let is_last = lines.peek().is_none();
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        match serde_json::from_slice::<RangeRecord>(&line) {
            Ok(r) => {
                if r.range_lo >= r.range_hi {
                    return Err(SandError::Checkpoint(format!(
                        "line {line_no}: empty range [{}, {})",
                        r.range_lo, r.range_hi
                    )));
                }
                records.push(r)
            }
            // Torn final write from an interrupted run.
            Err(_) if is_last && !ends_with_newline => break,
            Err(e) => {
                return Err(SandError::Checkpoint(format!(
                    "{}: line {line_no}: {e}",
                    path.display()
                )))
            }
        }
    }
    Ok(records)
}

/// Fails unless all records share `base` (when given) and cover pairwise
/// disjoint ranges.
pub fn validate_disjoint(records: &[RangeRecord], base: Option<u32>) -> Result<()> {
    if let Some(b) = base {
        if let Some(r) = records.iter().find(|r| r.base != b) {
            return Err(SandError::Checkpoint(format!(
                "record [{}, {}) is for base {}, expected {b}",
                r.range_lo, r.range_hi, r.base
            )));
        }
    }
    let mut sorted: Vec<&RangeRecord> = records.iter().collect();
    sorted.sort_by_key(|r| (r.range_lo, r.range_hi));
    for w in sorted.windows(2) {
        if w[1].range_lo < w[0].range_hi {
            return Err(SandError::Checkpoint(format!(
                "ranges [{}, {}) and [{}, {}) overlap",
                w[0].range_lo, w[0].range_hi, w[1].range_lo, w[1].range_hi
            )));
        }
    }
    Ok(())
}

/// Merged view of a set of disjoint records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergedRecords {
    pub base: u32,
    /// Maximal contiguous covered intervals, half-open.
    pub covered: Vec<(u64, u64)>,
    pub primes: u64,
    pub counts: BTreeMap<u64, u64>,
}

pub fn merge_records(records: &[RangeRecord]) -> Result<MergedRecords> {
    let base = records
        .first()
        .map(|r| r.base)
        .ok_or_else(|| SandError::Checkpoint("nothing to merge".into()))?;
    validate_disjoint(records, Some(base))?;
    let mut sorted: Vec<&RangeRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.range_lo);
    let mut covered: Vec<(u64, u64)> = Vec::new();
    let mut counts = BTreeMap::new();
    let mut primes = 0;
    for r in sorted {
        match covered.last_mut() {
            Some(last) if last.1 == r.range_lo => last.1 = r.range_hi,
            _ => covered.push((r.range_lo, r.range_hi)),
        }
        RangeTally::merge_counts(&mut counts, &r.counts);
        primes += r.primes;
    }
    Ok(MergedRecords {
        base,
        covered,
        primes,
        counts,
    })
}

/// Appends records, one flushed line per finished unit. Shareable between
/// worker threads.
pub struct CheckpointWriter {
    base: u32,
    file: Mutex<File>,
}

impl CheckpointWriter {
    pub fn append(path: &Path, base: u32) -> Result<Self> {
        // Drop a torn final line so new records start on a clean line.
        if path.exists() {
            let bytes = std::fs::read(path)?;
            let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
            if keep < bytes.len() {
                OpenOptions::new()
                    .write(true)
                    .open(path)?
                    .set_len(keep as u64)?;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(CheckpointWriter {
            base,
            file: Mutex::new(file),
        })
    }

    pub fn record(&self, tally: &RangeTally) -> Result<()> {
        let mut line = serde_json::to_vec(&RangeRecord::from_tally(self.base, tally))?;
        line.push(b'\n');
        let mut f = self.file.lock().expect("checkpoint lock poisoned");
        f.write_all(&line)?;
        f.flush()?;
        Ok(())
    }
}
