//! Append-only JSONL checkpoints. A final line cut off mid-write is dropped and
//! truncated away; any other unreadable line is an error.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use super::record::VerificationRecord;
use crate::error::{Error, Result};

pub const FLUSH_EVERY_RECORDS: usize = 1000;
pub const FLUSH_EVERY: Duration = Duration::from_secs(10);

/// Reads all records written for `digest`. A missing or empty file yields none.
pub fn load_checkpoint(path: &Path, digest: &str) -> Result<Vec<VerificationRecord>> {
    let mut text = String::new();
    match File::open(path) {
        Ok(mut f) => {
            f.read_to_string(&mut text)?;
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    }
    let mut records = Vec::new();
    let mut valid_len = 0usize;
    let mut offset = 0usize;
    let lines: Vec<&str> = text.split_inclusive('\n').collect();
    for (i, raw) in lines.iter().enumerate() {
        let line_no = i + 1;
        offset += raw.len();
        let terminated = raw.ends_with('\n');
        let body = raw.trim_end_matches(['\n', '\r']);
        if body.trim().is_empty() {
            valid_len = offset;
            continue;
        }
        let parsed = serde_json::from_str::<VerificationRecord>(body)
            .map_err(|e| e.to_string())
            .and_then(|r| if r.checksum_ok() { Ok(r) } else { Err("checksum mismatch".to_string()) });
        match parsed {
            Ok(rec) => {
                if rec.config_digest != digest {
                    return Err(Error::DigestMismatch { expected: digest.to_string(), found: rec.config_digest });
                }
                records.push(rec);
                valid_len = offset;
            }
            Err(_) if !terminated && i + 1 == lines.len() => {
                // torn tail from an interrupted write
                let f = OpenOptions::new().write(true).open(path)?;
                f.set_len(valid_len as u64)?;
                return Ok(records);
            }
            Err(reason) => return Err(Error::CorruptCheckpoint { line: line_no, reason }),
        }
    }
    if !text.is_empty() && !text.ends_with('\n') {
        OpenOptions::new().append(true).open(path)?.write_all(b"\n")?;
    }
    Ok(records)
}

/// Buffered appender flushing every 1000 records or 10 seconds.
pub struct CheckpointWriter {
    path: PathBuf,
    out: BufWriter<File>,
    pending: usize,
    last_flush: Instant,
}

impl CheckpointWriter {
    pub fn open(path: &Path) -> Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(CheckpointWriter { path: path.to_path_buf(), out: BufWriter::new(file), pending: 0, last_flush: Instant::now() })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, record: &VerificationRecord) -> Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")?;
        self.pending += 1;
        if self.pending >= FLUSH_EVERY_RECORDS || self.last_flush.elapsed() >= FLUSH_EVERY {
            self.flush()?;
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        self.out.get_ref().sync_data()?;
        self.pending = 0;
        self.last_flush = Instant::now();
        Ok(())
    }
}

impl Drop for CheckpointWriter {
    fn drop(&mut self) {
        let _ = self.out.flush();
    }
}
