use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::metrics::EmpiricalDist;

/// CSV writer that emits every row with a single `write_all` and flushes it,
/// so an interrupted run leaves only whole rows behind.
pub struct RowWriter {
    file: File,
    path: PathBuf,
}

impl RowWriter {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut w = RowWriter {
            file: File::create(path)?,
            path: path.to_path_buf(),
        };
        w.write_line(&header.join(","))?;
        Ok(w)
    }

    fn write_line(&mut self, line: &str) -> Result<()> {
        let mut buf = String::with_capacity(line.len() + 1);
        buf.push_str(line);
        buf.push('\n');
        self.file.write_all(buf.as_bytes())?;
        self.file.flush()?;
        Ok(())
    }

    pub fn write_row<D: std::fmt::Display>(&mut self, cells: &[D]) -> Result<()> {
        let line = cells
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        self.write_line(&line)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

/// Pretty JSON, written to a sibling temp file and renamed into place.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_sample(path: &Path, d: &EmpiricalDist) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut file = std::io::BufWriter::new(File::create(path)?);
    d.write_csv(&mut file)?;
    file.flush()?;
    Ok(())
}
