use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::tensorfile::write_atomic;

/// Output directory; every file is written atomically.
pub(crate) struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub(crate) fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
        })
    }

    pub(crate) fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub(crate) fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
        bytes.push(b'\n');
        write_atomic(&self.path(name), &bytes)
    }

    pub(crate) fn write_text(&self, name: &str, text: &str) -> Result<()> {
        write_atomic(&self.path(name), text.as_bytes())
    }

    pub(crate) fn write_csv(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let to_err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(header).map_err(to_err)?;
        for row in rows {
            w.write_record(row).map_err(to_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        write_atomic(&self.path(name), &bytes)
    }
}

/// Shortest decimal that round-trips to the same double.
pub(crate) fn num(v: f64) -> String {
    format!("{v}")
}

pub(crate) fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}
