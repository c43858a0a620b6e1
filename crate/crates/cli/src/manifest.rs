//! Provenance record written next to every command's outputs.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::exit::{io_error, output_error, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Simulate,
    Ingest,
    Estimate,
    Report,
    Synthesize,
}

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: CommandKind,
    pub config_path: Option<String>,
    pub output_dir: String,
    pub seed: u64,
    pub parameters: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

pub const MANIFEST_FILE: &str = "run_manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn digest(path: &Path, shown_as: String) -> CliResult<FileDigest> {
    let bytes = std::fs::read(path).map_err(io_error(path))?;
    Ok(FileDigest {
        path: shown_as,
        bytes: bytes.len() as u64,
        sha256: sha256_hex(&bytes),
    })
}

impl RunManifest {
    pub fn new(command: CommandKind, output_dir: &Path, seed: u64, parameters: serde_json::Value) -> Self {
        Self {
            tool: "soiltherm",
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            config_path: None,
            output_dir: output_dir.display().to_string(),
            seed,
            parameters,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> CliResult<()> {
        let d = digest(path, path.display().to_string())?;
        self.inputs.push(d);
        Ok(())
    }

    /// Hashes every written file (relative to `dir`) and writes the manifest last.
    pub fn finish(mut self, dir: &Path, written: &[PathBuf]) -> CliResult<()> {
        let mut files = written.to_vec();
        files.sort();
        for f in files {
            let shown = f.strip_prefix(dir).unwrap_or(&f).display().to_string();
            self.outputs.push(digest(&f, shown)?);
        }
        let path = dir.join(MANIFEST_FILE);
        let mut json = serde_json::to_string_pretty(&self).expect("manifest serialises");
        json.push('\n');
        std::fs::write(&path, json).map_err(output_error(&path))
    }
}
