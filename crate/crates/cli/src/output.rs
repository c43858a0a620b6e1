use std::path::{Path, PathBuf};

use crate::exit::{output_error, CliResult};

/// Collects the files a command writes so they can be hashed into the run manifest.
pub struct OutputDir {
    pub dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(dir: PathBuf) -> CliResult<Self> {
        std::fs::create_dir_all(&dir).map_err(output_error(&dir))?;
        Ok(Self { dir, written: Vec::new() })
    }

    pub fn write(&mut self, name: impl AsRef<Path>, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(output_error(parent))?;
        }
        std::fs::write(&path, bytes).map_err(output_error(&path))?;
        self.written.push(path.clone());
        Ok(path)
    }
}

/// File-name-safe form of a soil name: `Soil A` becomes `soil_a`.
pub fn slug(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect();
    s.trim_matches('_').to_string()
}
