//! View manifests: one `view <object> <cv> <path>` line per characteristic
//! view, paths relative to the manifest, `#` comments.

use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub object: String,
    pub view: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn parse(path: &Path, text: &str) -> Result<Self, CliError> {
        let base = path.parent().unwrap_or(Path::new(""));
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or_default();
            match content.split_whitespace().collect::<Vec<_>>().as_slice() {
                [] => {}
                ["view", object, view, file] => entries.push(ManifestEntry {
                    object: object.to_string(),
                    view: view.to_string(),
                    path: base.join(file),
                }),
                _ => {
                    return Err(CliError::Manifest {
                        path: path.to_path_buf(),
                        line: idx + 1,
                        message: format!("expected 'view <object> <cv> <path>', got '{}'", content.trim()),
                    })
                }
            }
        }
        Ok(Self { entries })
    }
}
