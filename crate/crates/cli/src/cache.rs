//! Newline-delimited JSON result cache. Each record carries a key derived
//! from the operation, its parameters, the crate version and the
//! enumeration order, plus a digest of the payload so that damaged records
//! are detected and recomputed.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Changes whenever the order in which arc systems are enumerated changes.
pub const ENUMERATION_ORDER: &str = "dyck-lex-open-first";
const FILE_NAME: &str = "results.ndjson";

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    key: String,
    op: String,
    params: String,
    payload: String,
    digest: String,
    timestamp: u64,
}

pub struct Cache {
    path: PathBuf,
}

fn sha256_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

pub fn key(op: &str, params: &str) -> String {
    sha256_hex(&[op, params, CODE_VERSION, ENUMERATION_ORDER])
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache { path: dir.join(FILE_NAME) })
    }

    #[cfg(test)]
    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Payload stored under `(op, params)`, if an intact record exists.
    /// Damaged records are reported on stderr and skipped.
    pub fn get(&self, op: &str, params: &str) -> Option<String> {
        let text = fs::read_to_string(&self.path).ok()?;
        let want = key(op, params);
        let mut found = None;
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            match serde_json::from_str::<Record>(line) {
                Ok(r) if r.key == want => {
                    if sha256_hex(&[&r.payload]) == r.digest {
                        found = Some(r.payload);
                    } else {
                        eprintln!("warning: cache record on line {} has a bad digest; recomputing", i + 1);
                        found = None;
                    }
                }
                Ok(_) => {}
                Err(e) => eprintln!("warning: unreadable cache line {} ({e}); ignoring it", i + 1),
            }
        }
        found
    }

    pub fn put(&self, op: &str, params: &str, payload: &str) -> Result<()> {
        let record = Record {
            key: key(op, params),
            op: op.to_string(),
            params: params.to_string(),
            payload: payload.to_string(),
            digest: sha256_hex(&[payload]),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        };
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening {}", self.path.display()))?;
        writeln!(f, "{}", serde_json::to_string(&record)?)?;
        Ok(())
    }

    /// Cached payload, or the result of `compute` which is then stored.
    pub fn get_or_compute(&self, op: &str, params: &str, compute: impl FnOnce() -> Result<String>) -> Result<String> {
        if let Some(hit) = self.get(op, params) {
            return Ok(hit);
        }
        let payload = compute()?;
        self.put(op, params, &payload)?;
        Ok(payload)
    }
}
