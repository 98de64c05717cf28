//! On-disk state of a classification run: one JSON-lines file of examined
//! faces and one of types per corank, plus a manifest.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::formats::{jsonl_file_exists, read_jsonl_file, write_jsonl_file};

/// Level files above this many bytes are gzip-compressed.
pub const GZIP_THRESHOLD: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub corank: usize,
    pub facet_bits_hex: String,
    pub rank: usize,
    pub degenerate: bool,
    pub ann: Vec<Vec<i64>>,
    pub scheme: Option<String>,
    pub cert_b64: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRecord {
    pub corank: usize,
    pub rank: usize,
    pub scheme: String,
    pub cert_b64: String,
    pub ann_size: usize,
    pub vertex_count: usize,
    pub facet_bits_hex: String,
    /// Faces of this level in the class.
    pub faces: usize,
    pub extreme: bool,
    /// `None` until the next level has been computed.
    pub maximal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub corank: usize,
    pub rank: usize,
    pub faces: usize,
    pub degenerate: usize,
    pub types: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub n: usize,
    pub inventory_hash: String,
    pub levels: Vec<LevelSummary>,
    pub heredity_violations: usize,
}

pub fn faces_path(dir: &Path, corank: usize) -> PathBuf {
    dir.join(format!("faces_{corank:02}.jsonl"))
}

pub fn types_path(dir: &Path, corank: usize) -> PathBuf {
    dir.join(format!("types_{corank:02}.jsonl"))
}

pub fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}

pub fn read_manifest(dir: &Path) -> Result<Option<Manifest>> {
    let p = manifest_path(dir);
    if !p.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&p)?;
    Ok(Some(serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?))
}

pub fn write_manifest(dir: &Path, m: &Manifest) -> Result<()> {
    let p = manifest_path(dir);
    let tmp = p.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string_pretty(m)? + "\n")?;
    std::fs::rename(tmp, p)?;
    Ok(())
}

pub fn write_faces(dir: &Path, corank: usize, faces: &[FaceRecord]) -> Result<()> {
    write_jsonl_file(&faces_path(dir, corank), faces, GZIP_THRESHOLD).map(|_| ())
}

pub fn read_faces(dir: &Path, corank: usize) -> Result<Vec<FaceRecord>> {
    read_jsonl_file(&faces_path(dir, corank))
}

pub fn write_types(dir: &Path, corank: usize, types: &[TypeRecord]) -> Result<()> {
    write_jsonl_file(&types_path(dir, corank), types, GZIP_THRESHOLD).map(|_| ())
}

pub fn read_types(dir: &Path, corank: usize) -> Result<Vec<TypeRecord>> {
    read_jsonl_file(&types_path(dir, corank))
}

pub fn has_level(dir: &Path, corank: usize) -> bool {
    jsonl_file_exists(&faces_path(dir, corank)) && jsonl_file_exists(&types_path(dir, corank))
}
