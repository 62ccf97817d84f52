use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{CliError, PipelineConfig, CONFIG_VERSION};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Every file under the output directory with its content hash. Paths are
/// relative, so runs into different directories compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub config_version: u32,
    pub seed: u64,
    pub languages: Vec<String>,
    pub files: Vec<ManifestEntry>,
}

fn walk(root: &Path, dir: &Path, out: &mut Vec<ManifestEntry>) -> std::io::Result<()> {
    let mut entries: Vec<_> = std::fs::read_dir(dir)?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.file_name());
    for e in entries {
        let path = e.path();
        if e.file_type()?.is_dir() {
            walk(root, &path, out)?;
            continue;
        }
        let rel: Vec<String> = path
            .strip_prefix(root)
            .expect("walk stays under root")
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect();
        let rel = rel.join("/");
        if rel == MANIFEST_NAME {
            continue;
        }
        let bytes = std::fs::read(&path)?;
        out.push(ManifestEntry {
            path: rel,
            sha256: hex::encode(Sha256::digest(&bytes)),
            bytes: bytes.len() as u64,
        });
    }
    Ok(())
}

/// Hashes the output directory and writes `manifest.json` into it.
pub fn write_manifest(cfg: &PipelineConfig) -> Result<Manifest, CliError> {
    let root = &cfg.output_dir;
    let mut files = Vec::new();
    walk(root, root, &mut files).map_err(|e| CliError::Internal(format!("hashing {}: {e}", root.display())))?;
    files.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = Manifest {
        config_version: CONFIG_VERSION,
        seed: cfg.seed,
        languages: cfg.languages.iter().map(|l| l.code.clone()).collect(),
        files,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    wikitrends::report::write_atomic(&root.join(MANIFEST_NAME), text.as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(manifest)
}
