//! JSON sidecars: every artifact the CLI writes gets a `<name>.json`
//! companion holding the resolved configuration, the randomness source, the
//! input digest, and the export quantization. A sidecar is a complete
//! re-run recipe; feeding it back through `--config` reproduces the artifact
//! byte for byte.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SidecarError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RngInfo {
    pub algorithm: String,
    pub seed: u64,
    pub draw: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportInfo {
    /// Shift added before rounding to unsigned samples; subtract it on load
    /// to recover the signed field.
    pub offset: f64,
    pub bit_depth: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<RngInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub export: Option<ExportInfo>,
    /// Derived quantities or per-channel reports; never read back by
    /// `--config`, purely informative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub results: Option<Value>,
}

impl Sidecar {
    pub fn new(command: &str, config: Value) -> Self {
        Self {
            tool: "sggm".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            rng: None,
            input: None,
            export: None,
            results: None,
        }
    }

    /// `field.pgm` gets `field.pgm.json`: the artifact name stays visible.
    pub fn path_for(artifact: &Path) -> PathBuf {
        let mut name = artifact.file_name().unwrap_or_default().to_os_string();
        name.push(".json");
        artifact.with_file_name(name)
    }

    pub fn write_for(&self, artifact: &Path) -> Result<PathBuf, SidecarError> {
        let path = Self::path_for(artifact);
        let shown = path.display().to_string();
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|source| SidecarError::Json { path: shown.clone(), source })?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|source| SidecarError::Io { path: shown, source })?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Self, SidecarError> {
        let shown = path.display().to_string();
        let bytes = std::fs::read(path)
            .map_err(|source| SidecarError::Io { path: shown.clone(), source })?;
        serde_json::from_slice(&bytes).map_err(|source| SidecarError::Json { path: shown, source })
    }

    /// Export offset recorded next to `artifact`, when a readable sidecar
    /// exists there. Missing or foreign sidecars mean "no shift".
    pub fn offset_for(artifact: &Path) -> f64 {
        Self::load(&Self::path_for(artifact))
            .ok()
            .and_then(|s| s.export)
            .map(|e| e.offset)
            .unwrap_or(0.0)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().fold(String::with_capacity(64), |mut acc, b| {
        use std::fmt::Write;
        let _ = write!(acc, "{b:02x}");
        acc
    })
}

pub fn digest_file(path: &Path) -> Result<String, SidecarError> {
    let bytes = std::fs::read(path)
        .map_err(|source| SidecarError::Io { path: path.display().to_string(), source })?;
    Ok(sha256_hex(&bytes))
}
