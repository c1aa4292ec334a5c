//! Line-delimited JSON checkpoint for resumable scans.
//!
//! ```text
//! {"format":"berndenom-scan","version":1,"limit":…,"chunk_size":…,"config_hash":"…"}
//! {"lo":…,"hi":…,"exceptional":[…],…,"checksum":"…"}      one per finished chunk
//! {"complete":true,"chunks":…,"config_hash":"…"}
//! ```
//!
//! Chunk records may appear in any order. Each carries a SHA-256 over its
//! other fields; a record that fails to parse or verify rejects the whole
//! file.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ChunkSummary;
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "berndenom-scan";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    limit: u64,
    chunk_size: u64,
    config_hash: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Footer {
    complete: bool,
    chunks: usize,
    config_hash: String,
}

#[derive(Serialize, Deserialize)]
struct RecordBody {
    lo: u64,
    hi: u64,
    exceptional: Vec<u64>,
    omega_sum: u64,
    omega_max: u16,
    omega_max_n: u64,
    kappa_fixed: String,
    kappa_min: f64,
    kappa_max: f64,
    fingerprint: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    lo: u64,
    hi: u64,
    exceptional: Vec<u64>,
    omega_sum: u64,
    omega_max: u16,
    omega_max_n: u64,
    kappa_fixed: String,
    kappa_min: f64,
    kappa_max: f64,
    fingerprint: String,
    checksum: String,
}

impl RecordBody {
    fn from_summary(s: &ChunkSummary) -> Self {
        Self {
            lo: s.lo,
            hi: s.hi,
            exceptional: s.exceptional.clone(),
            omega_sum: s.omega_sum,
            omega_max: s.omega_max,
            omega_max_n: s.omega_max_n,
            kappa_fixed: s.kappa_fixed.to_string(),
            kappa_min: s.kappa_min,
            kappa_max: s.kappa_max,
            fingerprint: format!("{:016x}", s.fingerprint),
        }
    }

    fn checksum(&self) -> Result<String> {
        let bytes = serde_json::to_vec(self)?;
        Ok(hex::encode(Sha256::digest(&bytes)))
    }

    fn seal(self) -> Result<Record> {
        let checksum = self.checksum()?;
        Ok(Record {
            lo: self.lo,
            hi: self.hi,
            exceptional: self.exceptional,
            omega_sum: self.omega_sum,
            omega_max: self.omega_max,
            omega_max_n: self.omega_max_n,
            kappa_fixed: self.kappa_fixed,
            kappa_min: self.kappa_min,
            kappa_max: self.kappa_max,
            fingerprint: self.fingerprint,
            checksum,
        })
    }
}

impl Record {
    fn open(self, line: usize) -> Result<ChunkSummary> {
        let body = RecordBody {
            lo: self.lo,
            hi: self.hi,
            exceptional: self.exceptional,
            omega_sum: self.omega_sum,
            omega_max: self.omega_max,
            omega_max_n: self.omega_max_n,
            kappa_fixed: self.kappa_fixed,
            kappa_min: self.kappa_min,
            kappa_max: self.kappa_max,
            fingerprint: self.fingerprint,
        };
        if body.checksum()? != self.checksum {
            return Err(Error::ChecksumMismatch { line });
        }
        let bad = |what: &str| Error::Checkpoint(format!("line {line}: invalid {what}"));
        Ok(ChunkSummary {
            lo: body.lo,
            hi: body.hi,
            exceptional: body.exceptional,
            omega_sum: body.omega_sum,
            omega_max: body.omega_max,
            omega_max_n: body.omega_max_n,
            kappa_fixed: body.kappa_fixed.parse().map_err(|_| bad("kappa_fixed"))?,
            kappa_min: body.kappa_min,
            kappa_max: body.kappa_max,
            fingerprint: u64::from_str_radix(&body.fingerprint, 16)
                .map_err(|_| bad("fingerprint"))?,
        })
    }
}

fn config_hash(limit: u64, chunk_size: u64) -> String {
    let text = format!("{CHECKPOINT_FORMAT}/v{CHECKPOINT_VERSION};limit={limit};chunk_size={chunk_size}");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// An open checkpoint file: validated prior records plus an append handle.
pub struct Checkpoint {
    path: PathBuf,
    file: File,
    config_hash: String,
    completed: Vec<ChunkSummary>,
    finished: bool,
}

impl Checkpoint {
    /// Opens `path` for a scan with the given configuration.
    ///
    /// A missing file is created. An empty file starts a fresh scan with a
    /// warning. Otherwise the header must match the configuration and every
    /// record must verify.
    pub fn open(path: &Path, limit: u64, chunk_size: u64) -> Result<Self> {
        let hash = config_hash(limit, chunk_size);
        let existing = match File::open(path) {
            Ok(f) => Some(f),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
            Err(e) => return Err(e.into()),
        };
        let mut completed = Vec::new();
        let mut finished = false;
        let mut fresh = true;
        if let Some(f) = existing {
            let lines: Vec<String> = BufReader::new(f).lines().collect::<std::io::Result<_>>()?;
            let nonblank: Vec<(usize, &String)> = lines
                .iter()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| (i + 1, l))
                .collect();
            if nonblank.is_empty() {
                log::warn!("checkpoint {} is empty; starting a fresh scan", path.display());
            } else {
                fresh = false;
                let (hline, htext) = nonblank[0];
                let header: Header = serde_json::from_str(htext).map_err(|e| {
                    Error::Checkpoint(format!("line {hline}: unreadable header: {e}"))
                })?;
                if header.format != CHECKPOINT_FORMAT || header.version != CHECKPOINT_VERSION {
                    return Err(Error::Checkpoint(format!(
                        "unsupported format {} v{}",
                        header.format, header.version
                    )));
                }
                if header.limit != limit || header.chunk_size != chunk_size {
                    return Err(Error::Checkpoint(format!(
                        "checkpoint was written for limit={} chunk_size={}, requested limit={limit} chunk_size={chunk_size}",
                        header.limit, header.chunk_size
                    )));
                }
                if header.config_hash != hash {
                    return Err(Error::Checkpoint("config hash mismatch".into()));
                }
                for &(line, text) in &nonblank[1..] {
                    if finished {
                        return Err(Error::Checkpoint(format!("line {line}: data after completion marker")));
                    }
                    if let Ok(footer) = serde_json::from_str::<Footer>(text) {
                        if footer.config_hash != hash || !footer.complete {
                            return Err(Error::Checkpoint(format!("line {line}: bad completion marker")));
                        }
                        finished = true;
                        continue;
                    }
                    let record: Record = serde_json::from_str(text).map_err(|e| {
                        Error::Checkpoint(format!("line {line}: unreadable record: {e}"))
                    })?;
                    let summary = record.open(line)?;
                    if completed.iter().any(|c: &ChunkSummary| c.lo == summary.lo) {
                        return Err(Error::Checkpoint(format!("line {line}: duplicate chunk {}", summary.lo)));
                    }
                    completed.push(summary);
                }
            }
        }

        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        if fresh {
            file.set_len(0)?;
            let header = Header {
                format: CHECKPOINT_FORMAT.into(),
                version: CHECKPOINT_VERSION,
                limit,
                chunk_size,
                config_hash: hash.clone(),
            };
            writeln!(file, "{}", serde_json::to_string(&header)?)?;
            file.flush()?;
        }
        completed.sort_by_key(|c| c.lo);
        Ok(Self {
            path: path.to_path_buf(),
            file,
            config_hash: hash,
            completed,
            finished,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn completed(&self) -> &[ChunkSummary] {
        &self.completed
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn append(&mut self, summary: &ChunkSummary) -> Result<()> {
        let record = RecordBody::from_summary(summary).seal()?;
        writeln!(self.file, "{}", serde_json::to_string(&record)?)?;
        self.file.flush()?;
        Ok(())
    }

    /// Writes the completion marker (once).
    pub fn finish(&mut self, chunks: usize) -> Result<()> {
        if self.finished {
            return Ok(());
        }
        let footer = Footer {
            complete: true,
            chunks,
            config_hash: self.config_hash.clone(),
        };
        writeln!(self.file, "{}", serde_json::to_string(&footer)?)?;
        self.file.flush()?;
        self.finished = true;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeSieve;
    use crate::scanner::scan_omega_plus;

    fn summary(lo: u64, hi: u64) -> ChunkSummary {
        let sieve = PrimeSieve::new(1000).unwrap();
        scan_omega_plus(lo, hi, &sieve).unwrap().summary()
    }

    #[test]
    fn records_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        let mut cp = Checkpoint::open(&path, 2000, 500).unwrap();
        let (a, b) = (summary(501, 1000), summary(1, 500));
        cp.append(&a).unwrap();
        cp.append(&b).unwrap();
        drop(cp);
        let cp = Checkpoint::open(&path, 2000, 500).unwrap();
        assert_eq!(cp.completed(), &[b, a]);
        assert!(!cp.is_finished());
    }

    #[test]
    fn tampered_record_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        let mut cp = Checkpoint::open(&path, 2000, 500).unwrap();
        cp.append(&summary(1, 500)).unwrap();
        drop(cp);
        let text = std::fs::read_to_string(&path).unwrap();
        let tampered = text.replace("\"omega_sum\":", "\"omega_sum\":1");
        std::fs::write(&path, tampered).unwrap();
        assert!(matches!(
            Checkpoint::open(&path, 2000, 500),
            Err(Error::ChecksumMismatch { line: 2 })
        ));
        std::fs::write(&path, text.replace("\"hi\"", "\"hj\"")).unwrap();
        assert!(matches!(Checkpoint::open(&path, 2000, 500), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn config_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        Checkpoint::open(&path, 2000, 500).unwrap();
        assert!(matches!(Checkpoint::open(&path, 3000, 500), Err(Error::Checkpoint(_))));
        assert!(matches!(Checkpoint::open(&path, 2000, 400), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn empty_file_starts_fresh() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        std::fs::write(&path, "").unwrap();
        let cp = Checkpoint::open(&path, 2000, 500).unwrap();
        assert!(cp.completed().is_empty());
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("{\"format\":\"berndenom-scan\",\"version\":1"));
    }
}
