//! Content-addressed store of raw provider responses.
//!
//! One JSON file per request digest under the cache directory, holding the canonical
//! request, the raw response text and a unix timestamp. Files are written to a temporary
//! name and renamed into place, so concurrent writers of the same digest never expose a
//! partial entry.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RequestDigest([u8; 32]);

impl RequestDigest {
    /// Digest of `(capability, model, payload)` under canonical serialization.
    ///
    /// `serde_json::Value` objects keep their keys sorted, so payloads that differ only in
    /// key order serialize identically.
    pub fn of(capability: &str, model: &str, payload: &Value) -> Self {
        let canonical = canonical_request(capability, model, payload);
        RequestDigest(Sha256::digest(canonical.as_bytes()).into())
    }

    pub fn hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Display for RequestDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

pub(crate) fn canonical_request(capability: &str, model: &str, payload: &Value) -> String {
    json!({ "capability": capability, "model": model, "payload": payload }).to_string()
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    request: Value,
    response: String,
    timestamp: u64,
}

#[derive(Debug, Clone)]
pub struct ResponseCache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl ResponseCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(ResponseCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_path(&self, digest: &RequestDigest) -> PathBuf {
        self.dir.join(format!("{}.json", digest.hex()))
    }

    /// Cached raw response, if any. Unreadable entries are evicted and reported as a miss.
    pub fn lookup(&self, digest: &RequestDigest) -> Option<String> {
        let path = self.entry_path(digest);
        let text = std::fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(entry) => Some(entry.response),
            Err(err) => {
                log::warn!("evicting corrupt cache entry {}: {err}", path.display());
                self.evict(digest);
                None
            }
        }
    }

    pub fn store(&self, digest: &RequestDigest, request: &Value, response: &str) -> Result<()> {
        let entry = CacheEntry {
            request: request.clone(),
            response: response.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let target = self.entry_path(digest);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            digest.hex(),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let text = serde_json::to_string_pretty(&entry)?;
        std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, &target).map_err(|e| Error::io(&target, e))
    }

    pub fn evict(&self, digest: &RequestDigest) {
        let _ = std::fs::remove_file(self.entry_path(digest));
    }
}
