//! Run records and CSV emission.
//!
//! Every run writes exactly one RunRecord JSON next to its CSVs. CSV
//! numeric fields use Rust's shortest round-trip decimal formatting (no
//! locale dependence), so identical configs give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use kfree_core::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub version: String,
    pub config: serde_json::Value,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
    pub summary: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Collects outputs while a command runs, then writes the RunRecord.
pub struct Run {
    command: String,
    out_dir: PathBuf,
    config: serde_json::Value,
    started: Instant,
    outputs: Vec<String>,
}

impl Run {
    pub fn start(command: &str, out_dir: &Path, config: serde_json::Value) -> Result<Self> {
        fs::create_dir_all(out_dir).map_err(|e| {
            Error::InvalidArgument(format!(
                "cannot create output directory {}: {e}",
                out_dir.display()
            ))
        })?;
        Ok(Run {
            command: command.to_string(),
            out_dir: out_dir.to_path_buf(),
            config,
            started: Instant::now(),
            outputs: Vec::new(),
        })
    }

    /// Resolve a file path: absolute stays put, relative lands in the
    /// run's output directory.
    pub fn path_for(&self, name: &str) -> PathBuf {
        let p = Path::new(name);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.out_dir.join(p)
        }
    }

    pub fn write_csv<I>(&mut self, name: &str, header: &str, rows: I) -> Result<PathBuf>
    where
        I: IntoIterator<Item = String>,
    {
        let path = self.path_for(name);
        let mut buf = String::with_capacity(4096);
        buf.push_str(header);
        buf.push('\n');
        for row in rows {
            buf.push_str(&row);
            buf.push('\n');
        }
        write_file(&path, buf.as_bytes())?;
        self.outputs.push(path.display().to_string());
        Ok(path)
    }

    /// Write the RunRecord and return its path.
    pub fn finish(self, summary: serde_json::Value, error: Option<String>) -> Result<PathBuf> {
        let record = RunRecord {
            command: self.command.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.config,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs,
            summary,
            error,
        };
        let path = self.out_dir.join(format!("{}.run.json", self.command));
        let text = serde_json::to_string_pretty(&record)
            .map_err(|e| Error::InvalidArgument(format!("record serialization failed: {e}")))?;
        write_file(&path, text.as_bytes())?;
        Ok(path)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(bytes)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}
