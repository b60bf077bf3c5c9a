//! Output plumbing: CSV tables, JSON documents, run manifests and
//! write-once fixture files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::ProfileRow;
use crate::scalar::format_g17;

/// A header row plus string cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Comma separated, header first, LF line endings, quoting only when needed.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for r in &self.rows {
            w.write_record(r).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
    }
}

/// `step,tv,l2` with 17 significant digits.
pub fn profile_table(rows: &[ProfileRow]) -> Table {
    let mut t = Table::new(["step", "tv", "l2"]);
    for r in rows {
        t.push([r.step.to_string(), format_g17(r.tv), format_g17(r.l2)]);
    }
    t
}

/// Pretty JSON with a trailing newline. Key order follows struct field
/// order, and maps are sorted.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Everything needed to re-run one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub version: String,
    pub started: String,
    pub finished: String,
    /// File name to SHA-256 of its contents.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&read_file(path)?)?)
    }

    pub fn record(&mut self, name: &str, contents: &str) {
        self.outputs.insert(name.to_string(), sha256_hex(contents.as_bytes()));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub value: Value,
    pub provenance: String,
}

/// Keyed oracle values stored as JSON. Existing keys are never replaced
/// unless the store was opened with `overwrite`.
#[derive(Debug)]
pub struct FixtureStore {
    path: PathBuf,
    entries: BTreeMap<String, Fixture>,
    overwrite: bool,
    dirty: bool,
}

impl FixtureStore {
    pub fn open(path: impl Into<PathBuf>, overwrite: bool) -> Result<Self> {
        let path = path.into();
        let entries = if path.exists() { serde_json::from_str(&read_file(&path)?)? } else { BTreeMap::new() };
        Ok(FixtureStore { path, entries, overwrite, dirty: false })
    }

    pub fn get(&self, key: &str) -> Option<&Fixture> {
        self.entries.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Stores `fixture` under `key`. A differing existing value is an error
    /// unless overwriting was requested.
    pub fn insert(&mut self, key: &str, fixture: Fixture) -> Result<()> {
        match self.entries.get(key) {
            Some(old) if old == &fixture => Ok(()),
            Some(_) if !self.overwrite => {
                Err(Error::Domain(format!("fixture {key:?} exists with a different value; overwrite not enabled")))
            }
            _ => {
                self.entries.insert(key.to_string(), fixture);
                self.dirty = true;
                Ok(())
            }
        }
    }

    pub fn save(&mut self) -> Result<()> {
        if self.dirty {
            write_file(&self.path, &to_json(&self.entries)?)?;
            self.dirty = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_and_line_endings() {
        let mut t = Table::new(["a", "b"]);
        t.push(["1/2", "x,y"]);
        t.push(["say \"hi\"", ""]);
        assert_eq!(t.to_csv(), "a,b\n1/2,\"x,y\"\n\"say \"\"hi\"\"\",\n");
    }

    #[test]
    fn empty_profile_is_header_only() {
        assert_eq!(profile_table(&[]).to_csv(), "step,tv,l2\n");
    }

    #[test]
    fn profile_digits() {
        let t = profile_table(&[ProfileRow { step: 3, tv: 0.1, l2: 1.0 }]);
        assert_eq!(t.to_csv(), "step,tv,l2\n3,0.10000000000000001,1\n");
    }

    #[test]
    fn digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn fixtures_are_write_once() {
        let dir = std::env::temp_dir().join(format!("bottomk-fixture-{}", std::process::id()));
        let path = dir.join("f.json");
        let fx = |v: i64| Fixture { value: v.into(), provenance: "test".into() };
        let mut s = FixtureStore::open(&path, false).unwrap();
        s.insert("a", fx(1)).unwrap();
        s.insert("a", fx(1)).unwrap();
        assert!(s.insert("a", fx(2)).is_err());
        s.save().unwrap();
        let mut s = FixtureStore::open(&path, true).unwrap();
        assert_eq!(s.get("a"), Some(&fx(1)));
        s.insert("a", fx(2)).unwrap();
        s.save().unwrap();
        assert_eq!(FixtureStore::open(&path, false).unwrap().get("a"), Some(&fx(2)));
        fs::remove_dir_all(dir).unwrap();
    }
}
