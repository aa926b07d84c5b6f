use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::IntegralTable;
use crate::error::Result;

const FORMAT_VERSION: u32 = 1;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "HERMSYNTH_CACHE_DIR";

/// On-disk store for integral tables.
///
/// Each table is a JSON file named `<key>.json` where `key` is the hex SHA-256
/// of `"<version>|<kind>|<params>|<kmax>|<order>|<refine>"`.
#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Stored {
    version: u32,
    key: String,
    table: IntegralTable,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache rooted at `$HERMSYNTH_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Key describing a table request.
    pub fn key(kind: &str, params: &[f64], kmax: usize, spec: super::QuadratureSpec) -> String {
        let p: Vec<String> = params
            .iter()
            .map(|x| format!("{:016x}", x.to_bits()))
            .collect();
        let desc = format!(
            "{FORMAT_VERSION}|{kind}|{}|{kmax}|{}|{}",
            p.join(","),
            spec.order,
            spec.refine
        );
        hex::encode(Sha256::digest(desc.as_bytes()))
    }

    /// Loads the table stored under `key`, or computes and stores it.
    pub fn get_or_compute(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<IntegralTable>,
    ) -> Result<IntegralTable> {
        let path = self.dir.join(format!("{key}.json"));
        if let Ok(bytes) = fs::read(&path) {
            match serde_json::from_slice::<Stored>(&bytes) {
                Ok(s) if s.version == FORMAT_VERSION && s.key == key => return Ok(s.table),
                _ => log::warn!("ignoring unreadable cache entry {}", path.display()),
            }
        }
        let table = compute()?;
        fs::create_dir_all(&self.dir)?;
        let stored = Stored {
            version: FORMAT_VERSION,
            key: key.to_string(),
            table,
        };
        let tmp = self
            .dir
            .join(format!("{key}.json.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&stored)?)?;
        fs::rename(&tmp, &path)?;
        Ok(stored.table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integral_vector_d2, QuadratureSpec};

    #[test]
    fn roundtrip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let spec = QuadratureSpec::default();
        let key = TableCache::key("vector", &[0.7], 3, spec);
        let first = cache
            .get_or_compute(&key, || integral_vector_d2(0.7, 3, spec))
            .unwrap();
        let second = cache
            .get_or_compute(&key, || panic!("should be served from disk"))
            .unwrap();
        assert_eq!(first, second);
        assert_ne!(key, TableCache::key("vector", &[0.7], 4, spec));
    }
}
