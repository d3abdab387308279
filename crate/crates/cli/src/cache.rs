//! Append-only JSON-lines cache of reports.
//!
//! Each entry is written with a single `write` on a file opened in append mode, so
//! lines from concurrent processes never interleave. Later entries win on read.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const CACHE_FILE: &str = "ahlab-cache.jsonl";

#[derive(Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub value: Value,
    pub timestamp: u64,
}

pub struct Cache {
    path: PathBuf,
    entries: HashMap<String, Value>,
    appender: Mutex<()>,
}

pub fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating cache directory {}", dir.display()))?;
        let path = dir.join(CACHE_FILE);
        let mut entries = HashMap::new();
        if path.exists() {
            let file = fs::File::open(&path)?;
            for line in BufReader::new(file).lines() {
                let line = line?;
                // a torn or foreign line is skipped rather than poisoning the cache
                if let Ok(e) = serde_json::from_str::<CacheEntry>(&line) {
                    entries.insert(e.key, e.value);
                }
            }
        }
        Ok(Cache {
            path,
            entries,
            appender: Mutex::new(()),
        })
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn append(&self, key: &str, value: &Value) -> Result<()> {
        let entry = CacheEntry {
            key: key.to_string(),
            value: value.clone(),
            timestamp: now(),
        };
        let mut line = serde_json::to_string(&entry)?;
        line.push('\n');
        let _guard = self.appender.lock().unwrap();
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        f.write_all(line.as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_write_wins() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        c.append("a", &Value::from(1)).unwrap();
        c.append("a", &Value::from(2)).unwrap();
        fs::OpenOptions::new()
            .append(true)
            .open(dir.path().join(CACHE_FILE))
            .unwrap()
            .write_all(b"{\"key\": tru")
            .unwrap();
        let c = Cache::open(dir.path()).unwrap();
        assert_eq!(c.get("a"), Some(&Value::from(2)));
    }
}
