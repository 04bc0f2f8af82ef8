//! On-disk cache of orbit rows, one JSON file per group.
//!
//! Big integers are stored as decimal strings. The header carries the
//! coefficient prefix the rows were built from, its SHA-256, and the SHA-256
//! of the rows, so a stale or damaged file is detected and rebuilt rather
//! than trusted. Files are replaced atomically through a rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::OrbitRows;
use crate::bigmath::to_decimal;
use crate::error::{Error, Result};
use crate::groups::CoeffTable;

pub const CACHE_FORMAT: &str = "subgrowth-orbit-rows";
pub const CACHE_VERSION: u32 = 1;

/// What happened when rows were requested from the cache.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheStatus {
    /// No file; rows computed and written.
    Miss,
    /// All requested rows were on disk.
    Hit,
    /// Some rows were on disk; the rest were computed and the file rewritten.
    Extended,
    /// The file was built from different coefficients; rebuilt.
    Stale,
    /// The file failed to parse or its checksum did not match; rebuilt.
    Corrupt,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CacheFile {
    format: String,
    version: u32,
    group: String,
    coeff_len: usize,
    coeff_sha256: String,
    rows_sha256: String,
    coeffs: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn sha_hex(chunks: impl Iterator<Item = String>) -> String {
    let mut h = Sha256::new();
    for c in chunks {
        h.update(c.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

fn rows_digest(rows: &[Vec<String>]) -> String {
    sha_hex(rows.iter().map(|r| r.join(",")))
}

fn coeff_digest(coeffs: &[String]) -> String {
    sha_hex(coeffs.iter().cloned())
}

/// Directory of orbit-row files.
#[derive(Clone, Debug)]
pub struct OrbitCache {
    dir: PathBuf,
}

impl OrbitCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        OrbitCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, group: &str) -> PathBuf {
        let safe: String = group
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        self.dir.join(format!("{safe}.orbits.json"))
    }

    /// Rows `0..=n_max` for the group of `coeffs`, reusing whatever valid rows
    /// are on disk.
    pub fn rows(&self, coeffs: &CoeffTable, n_max: usize) -> Result<(OrbitRows, CacheStatus)> {
        let path = self.path_for(&coeffs.group);
        let (mut rows, mut status) = match self.read(&path, coeffs) {
            Ok(Some(rows)) => (rows, CacheStatus::Hit),
            Ok(None) => (OrbitRows::new(coeffs.group.clone()), CacheStatus::Miss),
            Err(Verdict::Stale) => (OrbitRows::new(coeffs.group.clone()), CacheStatus::Stale),
            Err(Verdict::Corrupt) => (OrbitRows::new(coeffs.group.clone()), CacheStatus::Corrupt),
            Err(Verdict::Io(e)) => return Err(e),
        };
        if rows.n_max() >= n_max {
            rows.truncate(n_max);
            return Ok((rows, status));
        }
        rows.extend_to(coeffs, n_max)?;
        if status == CacheStatus::Hit {
            status = CacheStatus::Extended;
        }
        self.write(&path, coeffs, &rows)?;
        Ok((rows, status))
    }

    fn read(&self, path: &Path, coeffs: &CoeffTable) -> std::result::Result<Option<OrbitRows>, Verdict> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Verdict::Io(Error::io(path, e))),
        };
        let file: CacheFile = serde_json::from_str(&text).map_err(|_| Verdict::Corrupt)?;
        if file.format != CACHE_FORMAT || file.version != CACHE_VERSION {
            return Err(Verdict::Stale);
        }
        if file.coeffs.len() != file.coeff_len
            || coeff_digest(&file.coeffs) != file.coeff_sha256
            || rows_digest(&file.rows) != file.rows_sha256
            || file.rows.is_empty()
        {
            return Err(Verdict::Corrupt);
        }
        if file.group != coeffs.group {
            return Err(Verdict::Stale);
        }
        let overlap = file.coeff_len.min(coeffs.len());
        let same = (1..=overlap).all(|n| file.coeffs[n - 1] == to_decimal(coeffs.get(n)));
        if !same {
            return Err(Verdict::Stale);
        }
        let mut rows = Vec::with_capacity(file.rows.len());
        for (n, r) in file.rows.iter().enumerate() {
            if r.len() != n + 1 {
                return Err(Verdict::Corrupt);
            }
            let parsed: Option<Vec<BigInt>> = r.iter().map(|s| s.parse().ok()).collect();
            rows.push(parsed.ok_or(Verdict::Corrupt)?);
        }
        // rows beyond the verified coefficient prefix cannot be trusted
        rows.truncate(overlap + 1);
        Ok(Some(OrbitRows::from_rows(file.group, rows)))
    }

    fn write(&self, path: &Path, coeffs: &CoeffTable, rows: &OrbitRows) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let n_max = rows.n_max();
        let coeff_strings: Vec<String> = (1..=n_max).map(|n| to_decimal(coeffs.get(n))).collect();
        let row_strings: Vec<Vec<String>> = rows
            .rows()
            .iter()
            .map(|r| r.iter().map(to_decimal).collect())
            .collect();
        let file = CacheFile {
            format: CACHE_FORMAT.to_string(),
            version: CACHE_VERSION,
            group: coeffs.group.clone(),
            coeff_len: n_max,
            coeff_sha256: coeff_digest(&coeff_strings),
            rows_sha256: rows_digest(&row_strings),
            coeffs: coeff_strings,
            rows: row_strings,
        };
        let tmp = path.with_extension("json.tmp");
        let mut out = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        serde_json::to_writer(&mut out, &file)?;
        out.write_all(b"\n").map_err(|e| Error::io(&tmp, e))?;
        out.sync_all().map_err(|e| Error::io(&tmp, e))?;
        drop(out);
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }
}

enum Verdict {
    Stale,
    Corrupt,
    Io(Error),
}
