//! Results cache for `exact`: one JSON file, keyed by `N:k:D`, guarded by an
//! advisory lock on a sibling `.lock` file.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use progfree_core::exactsolver::{ExactRecord, SOLVER_VERSION};

use crate::CliError;

pub const CACHE_ENV: &str = "PROGFREE_CACHE";
pub const DEFAULT_CACHE: &str = ".progfree-cache.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub n: u64,
    pub k: usize,
    pub degree: u32,
    pub value: usize,
    pub witness: Vec<u64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub solver_version: String,
}

impl CacheEntry {
    pub fn from_record(record: &ExactRecord) -> Self {
        CacheEntry {
            n: record.n,
            k: record.k,
            degree: record.degree,
            value: record.value,
            witness: record.witness.members().to_vec(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            solver_version: SOLVER_VERSION.to_string(),
        }
    }
}

fn key(n: u64, k: usize, degree: u32) -> String {
    format!("{n}:{k}:{degree}")
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheData {
    entries: BTreeMap<String, CacheEntry>,
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    data: CacheData,
}

impl Cache {
    /// `$PROGFREE_CACHE`, else `.progfree-cache.json` in the working directory.
    pub fn default_path() -> PathBuf {
        std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE), PathBuf::from)
    }

    fn lock_file(path: &Path) -> Result<File, CliError> {
        let mut lock = path.as_os_str().to_owned();
        lock.push(".lock");
        let file = OpenOptions::new().create(true).truncate(false).write(true).open(lock)?;
        file.lock()?;
        Ok(file)
    }

    fn load_unlocked(path: &Path) -> CacheData {
        // an unreadable cache is treated as empty and rewritten
        fs::read_to_string(path)
            .ok()
            .and_then(|text| serde_json::from_str(&text).ok())
            .unwrap_or_default()
    }

    pub fn open(path: PathBuf) -> Result<Self, CliError> {
        let _lock = Self::lock_file(&path)?;
        let data = Self::load_unlocked(&path);
        Ok(Cache { path, data })
    }

    /// Entry for `(n, k, D)` written by the current solver version.
    pub fn get(&self, n: u64, k: usize, degree: u32) -> Option<&CacheEntry> {
        self.data
            .entries
            .get(&key(n, k, degree))
            .filter(|e| e.solver_version == SOLVER_VERSION)
    }

    /// Merges `entries` into the file on disk under the lock.
    pub fn store(&mut self, entries: &[CacheEntry]) -> Result<(), CliError> {
        if entries.is_empty() {
            return Ok(());
        }
        let _lock = Self::lock_file(&self.path)?;
        let mut data = Self::load_unlocked(&self.path);
        for e in entries {
            data.entries.insert(key(e.n, e.k, e.degree), e.clone());
        }
        let mut text = serde_json::to_string_pretty(&data)?;
        text.push('\n');
        let mut tmp = self.path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &self.path)?;
        self.data = data;
        Ok(())
    }
}
