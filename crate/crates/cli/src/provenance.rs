//! Run headers that make every output traceable to its exact inputs.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct Provenance {
    lines: Vec<String>,
}

fn read_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Read {
        path: path.to_path_buf(),
        source,
    }
}

/// SHA-256 of a file, or of a directory's sorted `name\0digest` entries.
pub fn digest_path(path: &Path) -> CliResult<String> {
    if path.is_dir() {
        let mut names: Vec<_> = std::fs::read_dir(path)
            .map_err(|e| read_err(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        names.sort();
        let mut h = Sha256::new();
        for p in names {
            h.update(p.file_name().unwrap_or_default().to_string_lossy().as_bytes());
            h.update([0]);
            h.update(digest_path(&p)?.as_bytes());
        }
        Ok(hex::encode(h.finalize()))
    } else {
        let bytes = std::fs::read(path).map_err(|e| read_err(path, e))?;
        Ok(hex::encode(Sha256::digest(&bytes)))
    }
}

impl Provenance {
    pub fn new(command: &str, params: &impl Serialize, seed: Option<u64>) -> Self {
        let canonical = serde_json::to_vec(params).expect("parameters serialize");
        let mut lines = vec![
            format!("proxim {} {command}", env!("CARGO_PKG_VERSION")),
            format!("config sha256: {}", hex::encode(Sha256::digest(&canonical))),
            format!("config: {}", String::from_utf8_lossy(&canonical)),
        ];
        if let Some(seed) = seed {
            lines.push(format!("seed: {seed}"));
        }
        Provenance { lines }
    }

    pub fn input(&mut self, label: &str, path: &Path) -> CliResult<()> {
        let digest = digest_path(path)?;
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        self.lines.push(format!("input {label}: {name} sha256 {digest}"));
        Ok(())
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// Header lines each prefixed with `# `.
    pub fn comment_block(&self) -> String {
        self.lines.iter().map(|l| format!("# {l}\n")).collect()
    }

    /// The same lines as one XML comment.
    pub fn xml_comment(&self) -> String {
        let body: Vec<String> = self.lines.iter().map(|l| l.replace("--", "-\u{2010}")).collect();
        format!("<!--\n{}\n-->\n", body.join("\n"))
    }
}
