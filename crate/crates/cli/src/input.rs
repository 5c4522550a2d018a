//! Reading input files and pairing hypothesis with reference records.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// An input file with its content digest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputFile {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Reads a UTF-8 file and records it for the report.
pub fn read(role: &str, path: &Path, inputs: &mut Vec<InputFile>) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    inputs.push(InputFile { role: role.to_string(), path: path.to_path_buf(), sha256: sha256_hex(&bytes) });
    String::from_utf8(bytes).map_err(|e| CliError::parse_at(path, None, e))
}

/// `(hyp index, ref index)` pairs and unused reference ids.
pub type Alignment = (Vec<(usize, usize)>, Vec<String>);

/// Pairs every hypothesis with the reference of the same id, keeping
/// hypothesis order. Returns `(hyp index, ref index)` pairs and the ids of
/// references no hypothesis asked for.
pub fn align_by_id(hyp_ids: &[&str], ref_ids: &[&str]) -> Result<Alignment> {
    if hyp_ids.is_empty() {
        return Err(CliError::Alignment("hypothesis corpus is empty".into()));
    }
    let index = |ids: &[&str], side: &str| -> Result<HashMap<String, usize>> {
        let mut map = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if map.insert(id.to_string(), i).is_some() {
                return Err(CliError::Alignment(format!("duplicate {side} id {id:?}")));
            }
        }
        Ok(map)
    };
    index(hyp_ids, "hypothesis")?;
    let refs = index(ref_ids, "reference")?;
    let mut missing = Vec::new();
    let mut pairs = Vec::with_capacity(hyp_ids.len());
    for (i, id) in hyp_ids.iter().enumerate() {
        match refs.get(*id) {
            Some(&j) => pairs.push((i, j)),
            None => missing.push(format!("{id:?}")),
        }
    }
    if !missing.is_empty() {
        return Err(CliError::Alignment(format!("no reference for hypothesis id(s) {}", missing.join(", "))));
    }
    let used: std::collections::HashSet<usize> = pairs.iter().map(|p| p.1).collect();
    let unused = ref_ids.iter().enumerate().filter(|(j, _)| !used.contains(j)).map(|(_, id)| id.to_string()).collect();
    Ok((pairs, unused))
}
