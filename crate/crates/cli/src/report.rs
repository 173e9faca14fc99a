//! Report envelopes and atomic output. Every JSON report carries the tool
//! version, the seed, and the full scenario echo, so any witness can be
//! reproduced offline from the report alone.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::scenario::Scenario;
use crate::CliError;

pub const TOOL: &str = "qds";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct Envelope<'a, B: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub scenario: &'a Scenario,
    pub report: B,
}

impl<'a, B: Serialize> Envelope<'a, B> {
    pub fn new(command: &'static str, scenario: &'a Scenario, report: B) -> Self {
        Envelope {
            tool: TOOL,
            version: VERSION,
            command,
            seed: scenario.run.seed,
            scenario,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports contain no non-serializable values");
        text.push('\n');
        text
    }
}

/// Writes to `out` when given (atomically: temp file in the target directory,
/// then rename), otherwise to stdout.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => std::path::PathBuf::from("."),
            };
            fs::create_dir_all(&dir)
                .map_err(|e| CliError::invalid(format!("cannot create output directory {}: {e}", dir.display())))?;
            let mut tmp = tempfile::NamedTempFile::new_in(&dir)
                .map_err(|e| CliError::invalid(format!("cannot create temp file in {}: {e}", dir.display())))?;
            tmp.write_all(content.as_bytes())
                .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
            tmp.persist(path)
                .map_err(|e| CliError::invalid(format!("cannot move report into place at {}: {e}", path.display())))?;
            Ok(())
        }
    }
}
