use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// A bag of non-negative link distances in km.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceSample {
    values: Vec<f64>,
    label: String,
}

impl DistanceSample {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidDistance { value: bad });
        }
        Ok(DistanceSample {
            values,
            label: label.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Strictly positive values, in input order.
    pub fn nonzero(&self) -> Vec<f64> {
        self.values.iter().copied().filter(|&v| v > 0.0).collect()
    }

    pub fn zero_count(&self) -> usize {
        self.values.iter().filter(|&&v| v == 0.0).count()
    }

    pub fn zero_fraction(&self) -> f64 {
        if self.values.is_empty() {
            0.0
        } else {
            self.zero_count() as f64 / self.values.len() as f64
        }
    }

    /// Parses the one-value-per-line text format. Blank lines and `#` comments
    /// are skipped; a `# label: <text>` comment sets the label.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut label = None;
        let mut values = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(l) = comment.trim_start().strip_prefix("label:") {
                    label.get_or_insert_with(|| l.trim().to_string());
                }
                continue;
            }
            let value: f64 = line.parse().map_err(|_| Error::MalformedLine {
                file: source.to_string(),
                line: idx + 1,
                reason: format!("'{line}' is not a decimal number"),
            })?;
            if !value.is_finite() || value < 0.0 {
                return Err(Error::MalformedLine {
                    file: source.to_string(),
                    line: idx + 1,
                    reason: format!("distance {value} must be finite and non-negative"),
                });
            }
            values.push(value);
        }
        if values.is_empty() {
            return Err(Error::ZeroValidRows {
                source_name: source.to_string(),
                malformed: 0,
            });
        }
        DistanceSample::new(values, label.unwrap_or_else(|| source.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Serializes with a `# label:` header. Values use the shortest decimal
    /// representation that parses back to the same `f64`.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 12 + 32);
        let _ = writeln!(out, "# label: {}", self.label.replace('\n', " "));
        for v in &self.values {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}
