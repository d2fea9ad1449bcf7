//! Stage results persisted under the SHA-256 of their inputs.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Clone, Debug)]
pub struct StageCache {
    dir: PathBuf,
}

impl StageCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        StageCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of the JSON form of `inputs`, prefixed by the stage name.
    pub fn key<I: Serialize>(stage: &str, inputs: &I) -> String {
        let json = serde_json::to_vec(inputs).expect("stage inputs serialize");
        let mut h = Sha256::new();
        h.update(stage.as_bytes());
        h.update([0]);
        h.update(&json);
        format!("{stage}-{}", hex::encode(h.finalize()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored value; unreadable entries count as missing.
    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let s = std::fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&s).ok()
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.tmp"));
        std::fs::write(&tmp, serde_json::to_vec(value)?)?;
        std::fs::rename(tmp, self.path(key))?;
        Ok(())
    }

    /// `get`, or compute and `put`.
    pub fn get_or<T, F>(cache: Option<&Self>, key: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = cache.and_then(|c| c.get(key)) {
            return Ok(v);
        }
        let v = compute()?;
        if let Some(c) = cache {
            c.put(key, &v)?;
        }
        Ok(v)
    }
}
