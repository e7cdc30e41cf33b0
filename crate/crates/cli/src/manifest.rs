//! Per-run manifest.

use std::path::Path;
use std::time::Duration;

use serde_json::json;

#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub timings: Vec<(String, Duration)>,
    pub files: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config_hash: &str) -> Self {
        Self { command: command.into(), config_hash: config_hash.into(), ..Self::default() }
    }

    pub fn to_json(&self) -> String {
        let timings: Vec<_> =
            self.timings.iter().map(|(k, d)| json!({ "operation": k, "seconds": d.as_secs_f64() })).collect();
        let v = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config_hash": self.config_hash,
            "timings": timings,
            "files": self.files,
        });
        serde_json::to_string_pretty(&v).expect("manifest serializes")
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::write(dir.join("manifest.json"), self.to_json() + "\n")
    }
}
