//! OEIS cross-validation: embedded prefixes, b-file parsing, and a fetch
//! cache that stores the raw bytes of each b-file once.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::{Error, Result};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "BIHARMONIC_OEIS_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Embedded,
    Fetched,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceRecord {
    pub id: String,
    #[serde(serialize_with = "crate::ser::indexed_decimals")]
    pub terms: Vec<(i64, BigInt)>,
    pub source: Source,
}

pub fn validate_id(id: &str) -> Result<()> {
    let ok = id.len() == 7 && id.starts_with('A') && id[1..].bytes().all(|b| b.is_ascii_digit());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidOeisId(id.to_string()))
    }
}

// Offsets are 1 for all five sequences.
const EMBEDDED: &[(&str, &[u64])] = &[
    ("A003601", &[1, 3, 5, 6, 7, 11, 13, 14, 15, 17, 19, 20, 21, 22, 23, 27, 29, 30, 31, 33, 35, 37]),
    ("A020487", &[1, 4, 9, 16, 20, 25, 36, 49, 50, 64, 81, 100, 117, 121, 144, 169, 180, 196, 200, 225]),
    ("A001599", &[1, 6, 28, 140, 270, 496, 672, 1638, 2970, 6200, 8128, 8190, 18600, 18620, 27846, 30240]),
    ("A001600", &[1, 2, 3, 5, 6, 5, 8, 9, 11, 10, 7, 15, 15, 14, 17, 24]),
    ("A210494", &[1, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 35, 37, 41, 43, 47, 53, 59, 61]),
];

pub fn embedded_ids() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|(id, _)| *id)
}

pub fn embedded_prefix(id: &str) -> Result<SequenceRecord> {
    validate_id(id)?;
    let (_, terms) = EMBEDDED.iter().find(|(k, _)| *k == id).ok_or_else(|| Error::UnknownSequence(id.to_string()))?;
    Ok(SequenceRecord {
        id: id.to_string(),
        terms: terms.iter().enumerate().map(|(i, &v)| (i as i64 + 1, BigInt::from(v))).collect(),
        source: Source::Embedded,
    })
}

/// Parses b-file text: `index value` per line, `#` comments and blank lines
/// skipped. Line numbers in errors are 1-based.
pub fn parse_bfile(id: &str, text: &str, source: Source) -> Result<SequenceRecord> {
    validate_id(id)?;
    let mut terms: Vec<(i64, BigInt)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || Error::MalformedLine { line: i + 1, text: raw.to_string() };
        let mut parts = line.split_whitespace();
        let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(malformed());
        };
        let idx: i64 = idx.parse().map_err(|_| malformed())?;
        let val: BigInt = val.parse().map_err(|_| malformed())?;
        if terms.last().is_some_and(|(prev, _)| *prev >= idx) {
            return Err(Error::NonIncreasingIndex(i + 1));
        }
        terms.push((idx, val));
    }
    Ok(SequenceRecord { id: id.to_string(), terms, source })
}

/// Renders a record in b-file format.
pub fn to_bfile(record: &SequenceRecord) -> String {
    let mut out = format!("# {}\n", record.id);
    for (i, v) in &record.terms {
        out.push_str(&format!("{i} {v}\n"));
    }
    out
}

pub fn bfile_url(id: &str) -> String {
    format!("https://oeis.org/{id}/b{}.txt", &id[1..])
}

/// Something that can GET a URL; swapped out in tests.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<Vec<u8>>;
}

/// Refuses every request; used when network access is not enabled.
pub struct Offline;

impl Transport for Offline {
    fn get(&self, url: &str) -> Result<Vec<u8>> {
        Err(Error::Fetch(format!("network disabled, cannot fetch {url}")))
    }
}

#[cfg(feature = "net")]
pub struct HttpTransport {
    agent: ureq::Agent,
}

#[cfg(feature = "net")]
impl HttpTransport {
    pub fn new(timeout: std::time::Duration) -> Self {
        let config = ureq::Agent::config_builder().timeout_global(Some(timeout)).build();
        HttpTransport { agent: config.into() }
    }
}

#[cfg(feature = "net")]
impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Vec<u8>> {
        let mut resp = self.agent.get(url).call().map_err(|e| Error::Fetch(e.to_string()))?;
        resp.body_mut().read_to_vec().map_err(|e| Error::Fetch(e.to_string()))
    }
}

pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_ENV) {
        return PathBuf::from(dir);
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .or_else(|| std::env::var_os("LOCALAPPDATA").map(PathBuf::from))
        .unwrap_or_else(std::env::temp_dir);
    base.join("biharmonic").join("oeis")
}

fn id_lock(id: &str) -> Arc<Mutex<()>> {
    static LOCKS: OnceLock<Mutex<HashMap<String, Arc<Mutex<()>>>>> = OnceLock::new();
    let mut map = LOCKS.get_or_init(Default::default).lock().expect("lock table poisoned");
    map.entry(id.to_string()).or_default().clone()
}

/// b-file fetcher backed by an immutable on-disk cache, one file per id.
pub struct BfileCache<T: Transport> {
    dir: PathBuf,
    transport: T,
}

impl<T: Transport> BfileCache<T> {
    pub fn new(dir: impl Into<PathBuf>, transport: T) -> Self {
        BfileCache { dir: dir.into(), transport }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, id: &str) -> PathBuf {
        self.dir.join(format!("b{}.txt", &id[1..]))
    }

    /// Raw b-file bytes, from the cache when present. Concurrent callers
    /// for the same id serialize; the first writer wins and the entry is
    /// never rewritten.
    pub fn fetch_raw(&self, id: &str) -> Result<Vec<u8>> {
        validate_id(id)?;
        let path = self.path_for(id);
        if let Ok(bytes) = fs::read(&path) {
            return Ok(bytes);
        }
        let lock = id_lock(id);
        let _guard = lock.lock().expect("id lock poisoned");
        if let Ok(bytes) = fs::read(&path) {
            return Ok(bytes);
        }
        let bytes = self.transport.get(&bfile_url(id))?;
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{}.{}.tmp", id, std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(bytes)
    }

    pub fn fetch_bfile(&self, id: &str) -> Result<SequenceRecord> {
        let bytes = self.fetch_raw(id)?;
        let text = String::from_utf8_lossy(&bytes);
        parse_bfile(id, &text, Source::Fetched)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    InsufficientOverlap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: i64,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub id: String,
    pub source: Source,
    pub compared: usize,
    pub mismatches: Vec<Mismatch>,
    pub verdict: Verdict,
}

/// Compares `computed` (its first element at `start_index`) with `record`
/// on their common indices. Neither side is corrected.
pub fn cross_check_record(record: &SequenceRecord, computed: &[BigInt], start_index: i64) -> CrossCheckReport {
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for (idx, expected) in &record.terms {
        let Some(pos) = idx.checked_sub(start_index).and_then(|p| usize::try_from(p).ok()) else {
            continue;
        };
        let Some(got) = computed.get(pos) else {
            continue;
        };
        compared += 1;
        if got != expected {
            mismatches.push(Mismatch { index: *idx, expected: expected.to_string(), computed: got.to_string() });
        }
    }
    let verdict = match (compared, mismatches.is_empty()) {
        (0, _) => Verdict::InsufficientOverlap,
        (_, true) => Verdict::Pass,
        _ => Verdict::Fail,
    };
    CrossCheckReport { id: record.id.clone(), source: record.source, compared, mismatches, verdict }
}

/// Cross-checks against the embedded prefix, falling back to `fetcher`
/// when the id has none.
pub fn cross_check<T: Transport>(
    id: &str,
    computed: &[BigInt],
    start_index: i64,
    fetcher: Option<&BfileCache<T>>,
) -> Result<CrossCheckReport> {
    let record = match (embedded_prefix(id), fetcher) {
        (Ok(r), _) => r,
        (Err(Error::UnknownSequence(_)), Some(f)) => f.fetch_bfile(id)?,
        (Err(e), _) => return Err(e),
    };
    Ok(cross_check_record(&record, computed, start_index))
}
