use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::CliError;

/// Writes `<out>/<name>.csv` and its `<name>.json` sidecar. The sidecar
/// carries the tool version, subcommand, seed, config and summary; nothing
/// run-dependent (paths, timings, job counts) goes into either file.
pub struct Artifact<'a> {
    pub out: &'a Path,
    pub name: &'a str,
    pub command: &'a str,
    pub seed: u64,
}

impl Artifact<'_> {
    pub fn write<R: Serialize, C: Serialize, S: Serialize>(
        &self,
        rows: &[R],
        config: &C,
        summary: &S,
    ) -> Result<PathBuf, CliError> {
        fs::create_dir_all(self.out)?;
        let csv_path = self.out.join(format!("{}.csv", self.name));
        let mut w = csv::Writer::from_path(&csv_path).map_err(|e| CliError::Io(e.to_string()))?;
        for r in rows {
            w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.flush()?;
        let sidecar = json!({
            "tool": "planartest",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
            "config": config,
            "summary": summary,
        });
        write_json(&self.out.join(format!("{}.json", self.name)), &sidecar)?;
        Ok(csv_path)
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}
