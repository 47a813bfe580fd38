use std::fs;
use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::run::{Products, RunError};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct ResidualSummary {
    pub kind: String,
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl ResidualSummary {
    pub fn from_values(kind: &str, values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        Some(ResidualSummary {
            kind: kind.to_string(),
            count: values.len(),
            min: values.iter().cloned().fold(f64::INFINITY, f64::min),
            max: values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub timestamp: String,
    pub command: &'static str,
    pub workers: usize,
    pub output_dir: String,
    pub config: &'a std::collections::BTreeMap<String, String>,
    pub files: Vec<FileEntry>,
    pub flags: &'a [String],
    pub residuals: Option<&'a ResidualSummary>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) fn write_manifest(config: &RunConfig, products: &Products) -> Result<PathBuf, RunError> {
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        command: config.command.name(),
        workers: config.workers,
        output_dir: config.output_dir.display().to_string(),
        config: &config.echo,
        files: products
            .files
            .iter()
            .map(|(name, contents)| FileEntry {
                name: name.clone(),
                bytes: contents.len(),
                sha256: sha256_hex(contents.as_bytes()),
            })
            .collect(),
        flags: &products.flags,
        residuals: products.residuals.as_ref(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| RunError::Manifest(e.to_string()))?;
    let path = config.output_dir.join(MANIFEST_NAME);
    fs::write(&path, json + "\n").map_err(|source| RunError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn summary_of_values() {
        let s = ResidualSummary::from_values("x", &[3.0, 1.0, 2.0]).unwrap();
        assert_eq!((s.count, s.min, s.max), (3, 1.0, 3.0));
        assert!(ResidualSummary::from_values("x", &[]).is_none());
    }
}
