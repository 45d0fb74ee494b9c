//! On-disk cache: one JSON file per entry, named by the digest of its key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "BSP_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".bsp-cache";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub digest: String,
    pub payload: String,
}

impl CacheEntry {
    pub fn new(key: &str, payload: &str) -> CacheEntry {
        CacheEntry { key: key.into(), digest: digest(payload), payload: payload.into() }
    }

    pub fn is_intact(&self) -> bool {
        self.digest == digest(&self.payload)
    }
}

pub fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// Canonical key `kind;theory=…;w=…;m=…;N=…`.
pub fn key(kind: &str, theory: impl std::fmt::Display, w: impl std::fmt::Display, m: i64, n: u32) -> String {
    format!("{kind};theory={theory};w={w};m={m};N={n}")
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn from_env() -> Cache {
        Cache::at(std::env::var_os(ENV_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR)))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", digest(key)))
    }

    /// The stored payload; missing, unreadable, mismatched or corrupted entries are misses.
    pub fn get(&self, key: &str) -> Option<String> {
        let text = fs::read_to_string(self.path_for(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == key && entry.is_intact()).then_some(entry.payload)
    }

    /// Stores `payload` under `key` by writing a temporary file and renaming it into place.
    pub fn put(&self, key: &str, payload: &str) -> std::io::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(key);
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let body = serde_json::to_string(&CacheEntry::new(key, payload)).map_err(std::io::Error::other)?;
        let result = (|| {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &path)
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        result.map(|_| path)
    }

    /// Typed lookup: the payload must re-parse and re-serialize to the stored bytes.
    pub fn fetch<T: Serialize + DeserializeOwned>(&self, key: &str) -> Option<T> {
        let payload = self.get(key)?;
        let value: T = serde_json::from_str(&payload).ok()?;
        (serde_json::to_string(&value).ok()? == payload).then_some(value)
    }

    /// Typed store; failures are logged and otherwise ignored.
    pub fn store<T: Serialize>(&self, key: &str, value: &T) {
        let payload = match serde_json::to_string(value) {
            Ok(p) => p,
            Err(e) => {
                log::warn!("cache: cannot serialize {key}: {e}");
                return;
            }
        };
        if let Err(e) = self.put(key, &payload) {
            log::warn!("cache: cannot write to {}: {e}; continuing uncached", self.dir.display());
        }
    }

    /// Returns the cached value or computes and stores it.
    pub fn get_or_compute<T, E>(&self, key: &str, compute: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        if let Some(v) = self.fetch(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.store(key, &v);
        Ok(v)
    }

    /// `(entries, intact entries, total bytes)`.
    pub fn stats(&self) -> (usize, usize, u64) {
        let mut out = (0, 0, 0);
        for path in self.entry_paths() {
            out.0 += 1;
            out.2 += fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
            let intact = fs::read_to_string(&path)
                .ok()
                .and_then(|t| serde_json::from_str::<CacheEntry>(&t).ok())
                .is_some_and(|e| e.is_intact());
            out.1 += intact as usize;
        }
        out
    }

    /// Removes all entries; returns how many were removed.
    pub fn clear(&self) -> std::io::Result<usize> {
        let paths = self.entry_paths();
        for p in &paths {
            fs::remove_file(p)?;
        }
        Ok(paths.len())
    }

    fn entry_paths(&self) -> Vec<PathBuf> {
        let Ok(read) = fs::read_dir(&self.dir) else {
            return Vec::new();
        };
        read.filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect()
    }
}
