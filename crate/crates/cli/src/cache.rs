//! Persistent memo: a JSON object mapping canonical keys to integers.
//!
//! Keys are prefixed by their kind: `query:` for results of whole commands,
//! `gw:` for complex relative invariants and `fw:` for the numbers `FW`. Values
//! read from the cache are trusted unless `--verify` asks for a recomputation.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use conic_floors::Int;
use tempfile::NamedTempFile;

pub const QUERY: &str = "query:";
pub const COMPLEX: &str = "gw:";
pub const REAL: &str = "fw:";

/// An open cache; holds an exclusive advisory lock on `<path>.lock` while alive.
pub struct Cache {
    path: PathBuf,
    _lock: File,
    pub entries: BTreeMap<String, Int>,
}

impl Cache {
    /// Lock and load. An unreadable or malformed cache is reported on stderr and
    /// treated as empty.
    pub fn open(path: &Path) -> io::Result<Cache> {
        let mut lock_path = path.as_os_str().to_owned();
        lock_path.push(".lock");
        let lock = OpenOptions::new().create(true).truncate(false).write(true).open(PathBuf::from(lock_path))?;
        lock.lock()?;
        let entries = match fs::read_to_string(path) {
            Ok(text) => match serde_json::from_str::<BTreeMap<String, Int>>(&text) {
                Ok(map) => map,
                Err(e) => {
                    eprintln!("warning: ignoring malformed cache {}: {e}", path.display());
                    BTreeMap::new()
                }
            },
            Err(e) if e.kind() == io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => {
                eprintln!("warning: ignoring unreadable cache {}: {e}", path.display());
                BTreeMap::new()
            }
        };
        Ok(Cache { path: path.to_path_buf(), _lock: lock, entries })
    }

    /// Entries of one kind, with the prefix removed.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (String, Int)> + 'a {
        self.entries.iter().filter_map(move |(k, &v)| k.strip_prefix(prefix).map(|k| (k.to_string(), v)))
    }

    pub fn insert_all(&mut self, prefix: &str, entries: impl IntoIterator<Item = (String, Int)>) {
        for (k, v) in entries {
            self.entries.insert(format!("{prefix}{k}"), v);
        }
    }

    /// Write atomically: a temporary file in the same directory renamed over the cache.
    pub fn save(&self) -> io::Result<()> {
        let dir = match self.path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = NamedTempFile::new_in(dir)?;
        serde_json::to_writer_pretty(&mut tmp, &self.entries)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(&self.path).map_err(|e| e.error)?;
        Ok(())
    }
}
