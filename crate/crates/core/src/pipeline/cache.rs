use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::report::ReductionRecord;
use crate::error::Result;
use crate::reduction::FormSign;

/// Identifies one reduction problem.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    /// `small` or `large`.
    pub family: String,
    pub k: Option<u32>,
    pub l: u32,
    pub sign: FormSign,
    #[serde(with = "crate::decimal")]
    pub m: BigInt,
}

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    /// Starting precision of the run that produced the record.
    precision: u32,
    record: ReductionRecord,
}

/// Reduction outcomes on disk, one JSON file per problem.
///
/// An entry is reused only for a request at the same or a lower starting
/// precision. Writes go through a temporary file and a rename, so an
/// interrupted sweep leaves only complete entries behind.
#[derive(Clone, Debug)]
pub struct ReductionCache {
    dir: PathBuf,
}

impl ReductionCache {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        let mut h = DefaultHasher::new();
        key.m.hash(&mut h);
        let k = key.k.map_or_else(|| "x".to_string(), |k| k.to_string());
        self.dir.join(format!(
            "{}-k{}-l{}-{}-m{:016x}.json",
            key.family,
            k,
            key.l,
            key.sign.as_str(),
            h.finish()
        ))
    }

    pub fn get(&self, key: &CacheKey, precision: u32) -> Option<ReductionRecord> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.key == *key && entry.precision >= precision).then_some(entry.record)
    }

    pub fn put(&self, key: &CacheKey, precision: u32, record: &ReductionRecord) -> Result<()> {
        let entry = Entry { key: key.clone(), precision, record: record.clone() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        std::fs::read_dir(&self.dir)
            .map(|d| d.filter_map(|e| e.ok()).filter(|e| e.path().extension().is_some_and(|x| x == "json")).count())
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
