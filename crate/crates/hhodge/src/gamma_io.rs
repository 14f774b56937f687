//! Loading initial-value tables from JSON.
//!
//! A file holds either one entry or an array of entries:
//!
//! ```json
//! {"theory": "line", "N": 2, "g": 1, "n": [2], "gamma": ["5/7", "-2"]}
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use hhodge_core::{GammaKey, GammaTable, Rational, StackyType, Theory};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaEntry {
    pub theory: Theory,
    #[serde(rename = "N")]
    pub modulus: u32,
    pub g: u32,
    pub n: Vec<u32>,
    pub gamma: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GammaDocument {
    One(GammaEntry),
    Many(Vec<GammaEntry>),
}

impl GammaEntry {
    pub fn key(&self) -> Result<GammaKey> {
        Ok(GammaKey {
            theory: self.theory,
            genus: self.g,
            stacky: StackyType::new(self.modulus, self.n.clone())?,
        })
    }
}

pub fn parse_gamma(text: &str, context: &str) -> Result<Vec<GammaEntry>> {
    let doc: GammaDocument = serde_json::from_str(text).map_err(|source| CliError::Json {
        context: context.to_string(),
        source,
    })?;
    Ok(match doc {
        GammaDocument::One(e) => vec![e],
        GammaDocument::Many(v) => v,
    })
}

pub fn insert_entries(table: &mut GammaTable, entries: Vec<GammaEntry>) -> Result<()> {
    for e in entries {
        let key = e.key()?;
        table.insert(key, e.gamma)?;
    }
    Ok(())
}

pub fn load_file(table: &mut GammaTable, path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    insert_entries(table, parse_gamma(&text, &path.display().to_string())?)
}

/// Every `*.json` file in `dir`, in file-name order.
pub fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Merges the files of `dir` (if any) and then `files`. Conflicting entries
/// for the same key are an error whatever the order.
pub fn load_tables(dir: Option<&Path>, files: &[PathBuf]) -> Result<GammaTable> {
    let mut table = GammaTable::new();
    if let Some(dir) = dir {
        for f in json_files(dir)? {
            load_file(&mut table, &f)?;
        }
    }
    for f in files {
        load_file(&mut table, f)?;
    }
    Ok(table)
}
