//! CSV, SVG and manifest writers shared by the subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// 17 significant digits, so every value round-trips exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// What one run produced and how to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub artifacts: Vec<String>,
    pub tool_version: String,
    pub argv: Vec<String>,
}

/// Collects the files written by a run; the manifest is written last.
pub struct Sink {
    dir: PathBuf,
    command: String,
    csv: bool,
    svg: bool,
    manifest_path: PathBuf,
    artifacts: Vec<String>,
}

impl Sink {
    /// With neither `csv` nor `svg` requested, both are written.
    pub fn new(dir: &Path, command: &str, csv: bool, svg: bool, manifest: Option<PathBuf>) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let both = !csv && !svg;
        let manifest_path = manifest.unwrap_or_else(|| dir.join(format!("{command}.manifest.json")));
        Ok(Self {
            dir: dir.to_path_buf(),
            command: command.to_string(),
            csv: csv || both,
            svg: svg || both,
            manifest_path,
            artifacts: Vec::new(),
        })
    }

    fn record(&mut self, path: &Path) {
        self.artifacts.push(path.display().to_string());
    }

    pub fn write_csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
        if !self.csv {
            return Ok(());
        }
        let path = self.dir.join(format!("{}.csv", self.command));
        let mut writer = csv::Writer::from_path(&path)?;
        writer.write_record(header)?;
        for row in rows {
            debug_assert_eq!(row.len(), header.len());
            writer.write_record(row)?;
        }
        writer.flush()?;
        self.record(&path);
        Ok(())
    }

    pub fn write_svg(&mut self, document: &str) -> io::Result<()> {
        if !self.svg {
            return Ok(());
        }
        let path = self.dir.join(format!("{}.svg", self.command));
        fs::write(&path, document)?;
        self.record(&path);
        Ok(())
    }

    pub fn finish(self, parameters: BTreeMap<String, Value>, rel_tol: f64, abs_tol: f64) -> io::Result<PathBuf> {
        let manifest = RunManifest {
            command: self.command,
            parameters,
            tolerances: BTreeMap::from([("abs_tol".to_string(), abs_tol), ("rel_tol".to_string(), rel_tol)]),
            artifacts: self.artifacts,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            argv: std::env::args().collect(),
        };
        if let Some(parent) = self.manifest_path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut text = serde_json::to_string_pretty(&manifest).map_err(io::Error::other)?;
        text.push('\n');
        fs::write(&self.manifest_path, text)?;
        Ok(self.manifest_path)
    }
}
