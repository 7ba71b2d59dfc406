//! Run manifests: enough provenance to replay a command bit-for-bit.
//!
//! A manifest records the tool version, the command line, the fully
//! resolved configuration, and a SHA-256 digest of every input file.
//! Nothing time- or host-dependent goes in, so identical invocations over
//! identical inputs serialize to identical bytes.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use submel_core::{Error, PipelineConfig, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub args: Vec<String>,
    pub config: PipelineConfig,
    pub inputs: Vec<InputDigest>,
}

/// Hex SHA-256 of a file's contents.
pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunManifest {
    /// Assemble a manifest for `command` run with `args` over `inputs`.
    pub fn new(
        command: &str,
        args: &[String],
        config: &PipelineConfig,
        inputs: &[PathBuf],
    ) -> Result<Self> {
        let mut digests = Vec::with_capacity(inputs.len());
        for path in inputs {
            digests.push(InputDigest {
                path: path.display().to_string(),
                sha256: sha256_file(path)?,
            });
        }
        Ok(Self {
            tool: "submel".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            args: args.to_vec(),
            config: *config,
            inputs: digests,
        })
    }

    /// Write as pretty JSON.
    pub fn write(&self, path: &Path) -> Result<()> {
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, body + "\n").map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// The conventional sidecar path: `<output>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.push_str(".manifest.json");
    output.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn digest_matches_known_vector() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("x");
        std::fs::write(&path, b"abc").unwrap();
        // SHA-256("abc") from the FIPS 180-2 appendix.
        assert_eq!(
            sha256_file(&path).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn identical_runs_serialize_identically() {
        let dir = tempdir().unwrap();
        let input = dir.path().join("a.wav");
        std::fs::write(&input, b"payload").unwrap();
        let config = PipelineConfig::default();
        let args = vec!["report".to_string(), "a.wav".to_string()];
        let m1 = RunManifest::new("report", &args, &config, std::slice::from_ref(&input)).unwrap();
        let m2 = RunManifest::new("report", &args, &config, std::slice::from_ref(&input)).unwrap();
        assert_eq!(
            serde_json::to_string(&m1).unwrap(),
            serde_json::to_string(&m2).unwrap()
        );
    }

    #[test]
    fn sidecar_path_appends_suffix() {
        assert_eq!(
            manifest_path(Path::new("/tmp/features.csv")),
            Path::new("/tmp/features.csv.manifest.json")
        );
    }

    #[test]
    fn missing_input_is_io_error() {
        let err = sha256_file(Path::new("/nonexistent/file")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
