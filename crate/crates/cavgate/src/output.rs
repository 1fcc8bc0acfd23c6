//! Result files and the per-run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use cavgate_core::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Stated at the top of every CSV and in every manifest.
pub const UNITS: &str = "hbar = 1; rates, detunings and couplings in units of the reference rate (kappa = 1 unless configured)";

/// One output file, held in memory until the run is complete.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn json<T: Serialize>(name: &str, value: &T) -> Self {
        let mut bytes = serde_json::to_vec_pretty(value).expect("report serializes");
        bytes.push(b'\n');
        Self { name: name.into(), bytes }
    }

    /// CSV with a `# schema; units` comment line followed by the header row.
    pub fn csv(name: &str, schema: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Self {
        let mut bytes = format!("# {schema}; units: {UNITS}\n").into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut bytes);
            w.write_record(header).expect("in-memory write");
            for row in rows {
                w.write_record(row.iter().map(|v| v.to_string())).expect("in-memory write");
            }
            w.flush().expect("in-memory write");
        }
        Self { name: name.into(), bytes }
    }

    pub fn sha256(&self) -> String {
        format!("{:x}", Sha256::digest(&self.bytes))
    }
}

/// Named pass/fail check computed by an experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub experiment: String,
    pub artifacts: Vec<Artifact>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn artifact(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub config_hash: String,
    pub units: &'static str,
    pub files: Vec<FileEntry>,
    pub wall_time_s: f64,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

/// `[re, im]`, the JSON form of a complex number.
pub fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

/// Writes the artifacts and `manifest.json` into `<root>/<experiment>-<hash>/`.
pub fn write_report(report: &Report, config_hash: &str, root: &Path, wall_time_s: f64) -> Result<PathBuf, CliError> {
    let dir = root.join(format!("{}-{config_hash}", report.experiment));
    fs::create_dir_all(&dir).map_err(|e| CliError::Io { path: dir.clone(), source: e })?;
    let mut files = Vec::with_capacity(report.artifacts.len());
    for a in &report.artifacts {
        let path = dir.join(&a.name);
        fs::write(&path, &a.bytes).map_err(|e| CliError::Io { path, source: e })?;
        files.push(FileEntry { name: a.name.clone(), bytes: a.bytes.len(), sha256: a.sha256() });
    }
    let manifest = Manifest {
        experiment: report.experiment.clone(),
        config_hash: config_hash.into(),
        units: UNITS,
        files,
        wall_time_s,
        verdicts: report.verdicts.clone(),
        passed: report.passed(),
    };
    let m = Artifact::json("manifest.json", &manifest);
    let path = dir.join(&m.name);
    fs::write(&path, &m.bytes).map_err(|e| CliError::Io { path, source: e })?;
    Ok(dir)
}
