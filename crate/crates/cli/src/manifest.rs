use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Sidecar describing one run. Re-running `args` from `working_dir`
/// reproduces every listed output byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub args: Vec<String>,
    pub working_dir: PathBuf,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub generator: Option<String>,
    pub outputs: Vec<PathBuf>,
    pub created_unix_seconds: u64,
}

impl RunManifest {
    pub fn new(command: &str, args: &[String], params: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            args: args.to_vec(),
            working_dir: std::env::current_dir().unwrap_or_default(),
            params,
            seed: None,
            generator: None,
            outputs: Vec::new(),
            created_unix_seconds: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).map_err(CliError::Json)?;
        crate::output::write_text(path, &(text + "\n"))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(CliError::Json)
    }
}

/// `dir/stem.manifest.json` for an output at `dir/stem.ext`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    output.with_file_name(format!("{stem}.manifest.json"))
}
