use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// In-memory CSV table; rows are written once the run has finished.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    rows: usize,
}

impl Table {
    pub fn new<I, S>(header: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Table { writer, rows: 0 })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    fn into_bytes(self) -> Result<Vec<u8>> {
        self.writer
            .into_inner()
            .map_err(|e| Error::Io(e.into_error()))
    }
}

/// Column names `prefix1..=prefixN`.
pub fn numbered(first: &str, prefix: &str, range: impl IntoIterator<Item = usize>) -> Vec<String> {
    std::iter::once(first.to_string())
        .chain(range.into_iter().map(|k| format!("{prefix}{k}")))
        .collect()
}

/// Shortest round-trip formatting, so files are byte-stable. Very small or
/// large magnitudes use exponent notation.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub name: String,
    pub rows: usize,
    pub bytes: usize,
    pub sha256: String,
}

/// Output directory that remembers what was written.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileRecord>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(|source| Error::Output {
            path: root.to_path_buf(),
            source,
        })?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn files(&self) -> &[FileRecord] {
        &self.files
    }

    pub fn write_table(&mut self, name: &str, table: Table) -> Result<()> {
        let rows = table.rows();
        let bytes = table.into_bytes()?;
        self.write_bytes(name, rows, &bytes)
    }

    fn write_bytes(&mut self, name: &str, rows: usize, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        fs::write(&path, bytes).map_err(|source| Error::Output { path, source })?;
        self.files.push(FileRecord {
            name: name.to_string(),
            rows,
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    /// Writes `manifest.json`; it is not listed in itself.
    pub fn write_manifest<T: Serialize>(&self, manifest: &T) -> Result<PathBuf> {
        let path = self.root.join("manifest.json");
        let mut text = serde_json::to_string_pretty(manifest)?;
        text.push('\n');
        fs::write(&path, text).map_err(|source| Error::Output {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}
