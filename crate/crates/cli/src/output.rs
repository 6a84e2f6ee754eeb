//! CSV and JSON artifacts.
//!
//! Every CSV starts with a comment line `# mfrisk <version> config_sha256=<hash>`
//! followed by the header row. Files are staged next to their targets and
//! renamed only after all of them were written.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::RunError;

/// A file to be written into the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Rows of a CSV table; cells are formatted by the caller.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn into_file(self, name: &str, cfg: &ExperimentConfig) -> OutputFile {
        let mut s = metadata_line(cfg);
        s.push_str(&self.header.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        OutputFile { name: name.into(), contents: s }
    }
}

pub fn metadata_line(cfg: &ExperimentConfig) -> String {
    format!("# mfrisk {} config_sha256={}\n", mfrisk_core::VERSION, cfg.hash())
}

/// Shortest round-trip decimal form; `NaN` marks a value that does not apply.
pub fn num(v: f64) -> String {
    let mut s = String::new();
    write!(s, "{v}").unwrap();
    s
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'static str,
    config_sha256: String,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty-printed JSON with the version and config hash at the top level.
/// Non-finite floats become `null`.
pub fn json_file<T: Serialize>(name: &str, cfg: &ExperimentConfig, body: &T) -> Result<OutputFile, RunError> {
    let env = Envelope { version: mfrisk_core::VERSION, config_sha256: cfg.hash(), body };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| RunError::Io(e.to_string()))?;
    s.push('\n');
    Ok(OutputFile { name: name.into(), contents: s })
}

/// Writes `files` into `dir`. Nothing is left behind under the final names
/// unless every file was staged successfully.
pub fn write_all(dir: &Path, files: &[OutputFile]) -> Result<(), RunError> {
    let io = |what: &str, p: &Path, e: std::io::Error| RunError::Io(format!("{what} {}: {e}", p.display()));
    std::fs::create_dir_all(dir).map_err(|e| io("cannot create", dir, e))?;
    let staged: Vec<_> = files.iter().map(|f| dir.join(format!(".{}.partial", f.name))).collect();
    for (f, tmp) in files.iter().zip(&staged) {
        if let Err(e) = std::fs::write(tmp, &f.contents) {
            for t in &staged {
                let _ = std::fs::remove_file(t);
            }
            return Err(io("cannot write", tmp, e));
        }
    }
    for (f, tmp) in files.iter().zip(&staged) {
        let target = dir.join(&f.name);
        std::fs::rename(tmp, &target).map_err(|e| io("cannot rename into", &target, e))?;
    }
    Ok(())
}
