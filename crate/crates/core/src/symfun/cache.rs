use std::collections::BTreeMap;
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::func::{Basis, SymFun};
use super::partition::Partition;
use crate::error::{Error, Result};

/// One cache file: the P functions for a single `m`, in the power-sum basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheFile {
    pub m: usize,
    pub basis: Basis,
    pub entries: BTreeMap<String, BTreeMap<String, String>>,
}

/// Keys stored for one `m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CacheStat {
    pub m: usize,
    pub partitions: Vec<Partition>,
}

/// JSON files `macdonald-m{m}-p.json` under a directory. Writes from one
/// process are serialized; each write goes through a temporary file and a
/// rename.
#[derive(Debug)]
pub struct DiskCache {
    dir: PathBuf,
    lock: Mutex<()>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Cache {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache {
            dir: dir.into(),
            lock: Mutex::new(()),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, m: usize) -> PathBuf {
        self.dir.join(format!("macdonald-m{m}-p.json"))
    }

    fn read(&self, m: usize) -> Result<CacheFile> {
        let path = self.path(m);
        match fs::read_to_string(&path) {
            Ok(text) => {
                let file: CacheFile = serde_json::from_str(&text).map_err(|e| io_err(&path, e))?;
                if file.m != m || file.basis != Basis::Power {
                    return Err(io_err(&path, "file does not match its name"));
                }
                Ok(file)
            }
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(CacheFile {
                m,
                basis: Basis::Power,
                entries: BTreeMap::new(),
            }),
            Err(e) => Err(io_err(&path, e)),
        }
    }

    pub fn get(&self, lambda: &Partition, m: usize) -> Result<Option<SymFun>> {
        let _guard = self.lock.lock().unwrap();
        let file = self.read(m)?;
        match file.entries.get(&lambda.to_string()) {
            Some(coeffs) => SymFun::from_string_coeffs(Basis::Power, coeffs)
                .map(Some)
                .map_err(|e| io_err(&self.path(m), e)),
            None => Ok(None),
        }
    }

    pub fn put(&self, lambda: &Partition, m: usize, f: &SymFun) -> Result<()> {
        let _guard = self.lock.lock().unwrap();
        fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        let mut file = self.read(m)?;
        file.entries
            .insert(lambda.to_string(), f.to_basis(Basis::Power).string_coeffs());
        let path = self.path(m);
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string_pretty(&file).map_err(|e| io_err(&path, e))?;
        fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))
    }

    fn files(&self) -> Result<Vec<usize>> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(io_err(&self.dir, e)),
        };
        let mut ms = Vec::new();
        for entry in entries {
            let name = entry.map_err(|e| io_err(&self.dir, e))?.file_name();
            let name = name.to_string_lossy();
            if let Some(m) = name
                .strip_prefix("macdonald-m")
                .and_then(|r| r.strip_suffix("-p.json"))
                .and_then(|m| m.parse().ok())
            {
                ms.push(m);
            }
        }
        ms.sort_unstable();
        Ok(ms)
    }

    pub fn stat(&self) -> Result<Vec<CacheStat>> {
        let _guard = self.lock.lock().unwrap();
        self.files()?
            .into_iter()
            .map(|m| {
                let file = self.read(m)?;
                let mut partitions = file
                    .entries
                    .keys()
                    .map(|k| k.parse().map_err(|e| io_err(&self.path(m), e)))
                    .collect::<Result<Vec<Partition>>>()?;
                partitions.sort();
                Ok(CacheStat { m, partitions })
            })
            .collect()
    }

    /// Remove every cache file; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let _guard = self.lock.lock().unwrap();
        let ms = self.files()?;
        for &m in &ms {
            let path = self.path(m);
            fs::remove_file(&path).map_err(|e| io_err(&path, e))?;
        }
        Ok(ms.len())
    }

    /// The cache file for `m`, or every file when `m` is `None`.
    pub fn export(&self, m: Option<usize>) -> Result<Vec<CacheFile>> {
        let _guard = self.lock.lock().unwrap();
        match m {
            Some(m) => Ok(vec![self.read(m)?]),
            None => self.files()?.into_iter().map(|m| self.read(m)).collect(),
        }
    }
}
