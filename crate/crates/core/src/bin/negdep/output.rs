use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use negdep::Result;

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    args: &'a [String],
    seed: Option<u64>,
    version: &'static str,
    outputs: Vec<String>,
    duration_seconds: f64,
}

/// Collects the outputs of one invocation and writes a manifest next to each
/// output file.
pub struct Run {
    command: &'static str,
    args: Vec<String>,
    seed: Option<u64>,
    started: Instant,
    outputs: Vec<PathBuf>,
}

impl Run {
    pub fn new(command: &'static str, seed: Option<u64>) -> Self {
        Self {
            command,
            args: std::env::args().skip(1).collect(),
            seed,
            started: Instant::now(),
            outputs: Vec::new(),
        }
    }

    /// Writes `bytes` to `path`, or to stdout when there is no path.
    pub fn emit(&mut self, path: Option<&Path>, bytes: &[u8]) -> Result<()> {
        match path {
            Some(p) => {
                std::fs::write(p, bytes)?;
                self.outputs.push(p.to_path_buf());
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
            }
        }
        Ok(())
    }

    pub fn emit_json<T: Serialize>(&mut self, path: Option<&Path>, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.emit(path, &bytes)
    }

    pub fn finish(self) -> Result<()> {
        let outputs: Vec<String> = self.outputs.iter().map(|p| p.display().to_string()).collect();
        let manifest = RunManifest {
            command: self.command,
            args: &self.args,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION"),
            outputs: outputs.clone(),
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        for p in &self.outputs {
            let mut name = p.clone().into_os_string();
            name.push(".manifest.json");
            std::fs::write(PathBuf::from(name), &bytes)?;
        }
        Ok(())
    }
}
