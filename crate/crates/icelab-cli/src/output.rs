//! Output plumbing: atomic file writes, 17-significant-digit floats, CSV
//! emission and run manifests.

use serde_json::{json, Value};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

/// Floats are printed with 17 significant digits so a re-parse is
/// bit-faithful.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write bytes atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Column-stable CSV with a header row.
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, fields: Vec<String>) {
        assert_eq!(fields.len(), self.header.len(), "schema mismatch");
        self.rows.push(fields);
    }

    pub fn to_string(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        write_atomic(path, &self.to_string())
    }
}

/// Every run emits a manifest carrying the resolved configuration, seed,
/// code version and wall clock.
pub struct Manifest {
    command: String,
    config: Value,
    seed: Option<u64>,
    outputs: Vec<PathBuf>,
    started: SystemTime,
}

impl Manifest {
    pub fn new(command: &str, config: Value, seed: Option<u64>) -> Self {
        Manifest {
            command: command.to_string(),
            config,
            seed,
            outputs: Vec::new(),
            started: SystemTime::now(),
        }
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn write(&self, dir: &Path, wall_ms: u128) -> io::Result<PathBuf> {
        let path = dir.join(format!("{}_manifest.json", self.command.replace(' ', "_")));
        let json = json!({
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "unix_time": self.started.duration_since(SystemTime::UNIX_EPOCH)
                .map(|d| d.as_secs()).unwrap_or(0),
            "wall_ms": wall_ms,
            "outputs": self.outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        });
        write_atomic(&path, &serde_json::to_string_pretty(&json).unwrap())?;
        Ok(path)
    }
}

/// Default seed: ICELAB_SEED from the environment, falling back to 1.
pub fn default_seed() -> u64 {
    std::env::var("ICELAB_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(1)
}
