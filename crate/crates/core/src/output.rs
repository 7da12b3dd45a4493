//! File emission shared by every subcommand.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Significant digits written for every floating-point CSV field.
pub const SIGNIFICANT_DIGITS: i32 = 12;

/// Fixed-point decimal rendering with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn decimal(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", (SIGNIFICANT_DIGITS - 1) as usize, 0.0);
    }
    let exponent = x.abs().log10().floor() as i32;
    let precision = (SIGNIFICANT_DIGITS - 1 - exponent).clamp(0, 340) as usize;
    format!("{x:.precision$}")
}

/// Ordered `key=value` block, one pair per line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValueBlock {
    entries: Vec<(String, String)>,
}

impl KeyValueBlock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

/// Hex-encoded SHA-256 of `bytes`.
pub fn digest_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes files into one output directory, surfacing every I/O error with its path.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: impl AsRef<Path>) -> Result<Self> {
        let root = root.as_ref().to_path_buf();
        fs::create_dir_all(&root).map_err(|source| Error::Io {
            path: root.clone(),
            source,
        })?;
        Ok(Self {
            root,
            written: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    /// Files written so far, in write order.
    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn write_with<F>(&mut self, name: &str, body: F) -> Result<PathBuf>
    where
        F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
    {
        let path = self.root.join(name);
        let io_err = |source| Error::Io {
            path: path.clone(),
            source,
        };
        let file = fs::File::create(&path).map_err(io_err)?;
        let mut writer = BufWriter::new(file);
        body(&mut writer).map_err(io_err)?;
        writer.flush().map_err(io_err)?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        self.write_with(name, |w| w.write_all(text.as_bytes()))
    }
}
