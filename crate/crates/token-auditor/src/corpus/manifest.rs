//! Corpus manifests: tab-separated rows naming artifacts to analyze,
//! with optional ground-truth labels, and ingestion of the artifacts
//! they point at.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::classify::Verdict;
use crate::corpus::fetch::Fetcher;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest line {line}: {message}")]
    Line { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Source,
    Bytecode,
}

/// Where an entry's artifact comes from: a file on disk, or a chain
/// address to resolve through the verified-source provider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Path(PathBuf),
    Address(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub kind: EntryKind,
    pub location: Location,
    pub label: Option<Verdict>,
}

/// Raw material for one analysis: the text read from disk or fetched,
/// hashed as read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractArtifact {
    pub id: String,
    pub kind: EntryKind,
    /// Solidity source, or hex text for bytecode entries.
    pub content: String,
    /// sha256 of the bytes as read, hex encoded.
    pub digest: String,
    /// Path or address the content came from.
    pub origin: String,
}

/// A manifest entry paired with its ingestion outcome. Failures are
/// carried as messages so one bad entry never aborts a scan.
#[derive(Debug)]
pub struct CorpusEntry {
    pub entry: ManifestEntry,
    pub artifact: Result<ContractArtifact, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn is_chain_address(text: &str) -> bool {
    let hex_part = match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(rest) => rest,
        None => return false,
    };
    hex_part.len() == 40 && hex_part.chars().all(|c| c.is_ascii_hexdigit())
}

/// Parses manifest text: `id<TAB>kind<TAB>path-or-address[<TAB>label]`.
/// Blank lines and lines starting with '#' are skipped. A third column
/// shaped like a 20-byte hex address is treated as one; anything else
/// is a path relative to the manifest.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, ManifestError> {
    let mut entries: Vec<ManifestEntry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 3 || fields.len() > 4 {
            return Err(ManifestError::Line {
                line: line_no,
                message: format!("expected 3 or 4 tab-separated fields, found {}", fields.len()),
            });
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(ManifestError::Line {
                line: line_no,
                message: "empty id".to_string(),
            });
        }
        if entries.iter().any(|e| e.id == id) {
            return Err(ManifestError::Line {
                line: line_no,
                message: format!("duplicate id {id:?}"),
            });
        }
        let kind = match fields[1].trim() {
            "source" => EntryKind::Source,
            "bytecode" => EntryKind::Bytecode,
            other => {
                return Err(ManifestError::Line {
                    line: line_no,
                    message: format!("unknown kind {other:?} (expected source or bytecode)"),
                })
            }
        };
        let target = fields[2].trim();
        if target.is_empty() {
            return Err(ManifestError::Line {
                line: line_no,
                message: "empty path or address".to_string(),
            });
        }
        let location = if is_chain_address(target) {
            if kind == EntryKind::Bytecode {
                return Err(ManifestError::Line {
                    line: line_no,
                    message: "address entries must have kind source".to_string(),
                });
            }
            Location::Address(target.to_string())
        } else {
            Location::Path(PathBuf::from(target))
        };
        let label = match fields.get(3).map(|f| f.trim()) {
            None | Some("") => None,
            Some("administrated") => Some(Verdict::Administrated),
            Some("ungoverned") | Some("effectively-ungoverned") => {
                Some(Verdict::EffectivelyUngoverned)
            }
            Some(other) => {
                return Err(ManifestError::Line {
                    line: line_no,
                    message: format!("unknown label {other:?}"),
                })
            }
        };
        entries.push(ManifestEntry {
            id: id.to_string(),
            kind,
            location,
            label,
        });
    }
    Ok(entries)
}

pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>, ManifestError> {
    let text = fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_manifest(&text)
}

/// Reads or fetches every entry's artifact. Relative paths resolve
/// against the manifest's directory. Per-entry failures become error
/// strings in the corresponding slot.
pub fn ingest(
    manifest_path: &Path,
    entries: Vec<ManifestEntry>,
    mut fetcher: Option<&mut Fetcher>,
) -> Vec<CorpusEntry> {
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    entries
        .into_iter()
        .map(|entry| {
            let artifact = match &entry.location {
                Location::Path(p) => {
                    let resolved = if p.is_absolute() { p.clone() } else { base.join(p) };
                    match fs::read(&resolved) {
                        Ok(bytes) => match String::from_utf8(bytes) {
                            Ok(content) => Ok(ContractArtifact {
                                id: entry.id.clone(),
                                kind: entry.kind,
                                digest: sha256_hex(content.as_bytes()),
                                content,
                                origin: resolved.display().to_string(),
                            }),
                            Err(_) => Err(format!("{} is not valid UTF-8", resolved.display())),
                        },
                        Err(e) => Err(format!("cannot read {}: {e}", resolved.display())),
                    }
                }
                Location::Address(addr) => match fetcher.as_deref_mut() {
                    Some(f) => f
                        .fetch_source(addr)
                        .map(|mut artifact| {
                            artifact.id = entry.id.clone();
                            artifact
                        })
                        .map_err(|e| e.to_string()),
                    None => Err(format!(
                        "entry {} names address {addr} but no provider is configured",
                        entry.id
                    )),
                },
            };
            CorpusEntry { entry, artifact }
        })
        .collect()
}
