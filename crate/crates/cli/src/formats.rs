//! Text and JSON-lines formats: distance-vector files, the ray inventory and
//! (possibly gzipped) JSON-lines streams.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use hypercone_core::exact::{fmt_rat, parse_rat};
use hypercone_core::facelat::Incidence;
use hypercone_core::hypercone::{n_from_pair_count, DistVec};
use hypercone_core::schlafli::{RayInventory, RayKind};

/// Parses whitespace-separated rationals `p/q` (or integers), one per pair in
/// storage order, into a distance vector.
pub fn parse_distance_text(text: &str) -> Result<DistVec> {
    let values = text
        .split_whitespace()
        .map(|t| parse_rat(t).ok_or_else(|| anyhow!("not a rational: {t:?}")))
        .collect::<Result<Vec<_>>>()?;
    let n = n_from_pair_count(values.len())
        .ok_or_else(|| anyhow!("{} values is not a pair count (n+1 choose 2)", values.len()))?;
    Ok(DistVec::new(n, values)?)
}

pub fn format_distance(d: &DistVec) -> String {
    d.values().iter().map(fmt_rat).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayRecord {
    pub id: usize,
    pub kind: String,
    pub orbit: usize,
    pub dist: Vec<String>,
}

pub fn ray_records(inv: &RayInventory) -> Vec<RayRecord> {
    inv.rays()
        .iter()
        .enumerate()
        .map(|(id, r)| RayRecord {
            id,
            kind: match r.kind {
                RayKind::Cut(_) => "cut",
                RayKind::Schlafli { .. } => "schlafli",
            }
            .to_string(),
            orbit: r.orbit,
            dist: r.dist.iter().map(|x| x.to_string()).collect(),
        })
        .collect()
}

/// SHA-256 over the facet list and the ray inventory, hex encoded. Checkpoints
/// record it so that a changed inventory invalidates them.
pub fn inventory_hash(inc: &Incidence) -> String {
    let mut h = Sha256::new();
    h.update(format!("n={}\n", inc.n()));
    for b in inc.facets() {
        h.update(format!("{:?}\n", b.coords()));
    }
    for r in inc.rays().rays() {
        h.update(format!("{:?}\n", r.dist));
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn to_jsonl<T: Serialize>(items: &[T]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for it in items {
        serde_json::to_writer(&mut out, it)?;
        out.push(b'\n');
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(w: impl Write, items: &[T]) -> Result<()> {
    let mut w = BufWriter::new(w);
    w.write_all(&to_jsonl(items)?)?;
    w.flush()?;
    Ok(())
}

/// Writes `items` to `base` (plain) or `base.gz` when the encoded size exceeds
/// `gzip_threshold` bytes, replacing either variant atomically. Returns the path written.
pub fn write_jsonl_file<T: Serialize>(base: &Path, items: &[T], gzip_threshold: usize) -> Result<PathBuf> {
    let bytes = to_jsonl(items)?;
    let compress = bytes.len() > gzip_threshold;
    let (path, other) = if compress { (gz_path(base), base.to_path_buf()) } else { (base.to_path_buf(), gz_path(base)) };
    let tmp = path.with_extension("tmp");
    {
        let f = File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        if compress {
            let mut enc = GzEncoder::new(BufWriter::new(f), Compression::default());
            enc.write_all(&bytes)?;
            enc.finish()?.flush()?;
        } else {
            let mut w = BufWriter::new(f);
            w.write_all(&bytes)?;
            w.flush()?;
        }
    }
    std::fs::rename(&tmp, &path)?;
    if other.exists() {
        std::fs::remove_file(&other)?;
    }
    Ok(path)
}

fn gz_path(base: &Path) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".gz");
    PathBuf::from(s)
}

/// Reads a JSON-lines file written by [`write_jsonl_file`], trying `base` then `base.gz`.
pub fn read_jsonl_file<T: DeserializeOwned>(base: &Path) -> Result<Vec<T>> {
    let reader: Box<dyn Read> = if base.exists() {
        Box::new(File::open(base)?)
    } else {
        let gz = gz_path(base);
        if !gz.exists() {
            bail!("missing {} (or .gz)", base.display());
        }
        Box::new(GzDecoder::new(File::open(gz)?))
    };
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).with_context(|| format!("{}:{}", base.display(), i + 1))?);
    }
    Ok(out)
}

pub fn jsonl_file_exists(base: &Path) -> bool {
    base.exists() || gz_path(base).exists()
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypercone_core::exact::ratio;

    #[test]
    fn distance_text_round_trip() {
        let d = parse_distance_text("1 1/2 3\n").unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.values()[1], ratio(1, 2));
        assert_eq!(format_distance(&d), "1 1/2 3");
        assert!(parse_distance_text("1 2").is_err());
        assert!(parse_distance_text("1 x 2").is_err());
    }

    #[test]
    fn jsonl_plain_and_gzip() {
        let dir = tempfile::tempdir().unwrap();
        let base = dir.path().join("items.jsonl");
        let items: Vec<u32> = (0..100).collect();
        assert_eq!(write_jsonl_file(&base, &items, usize::MAX).unwrap(), base);
        assert_eq!(read_jsonl_file::<u32>(&base).unwrap(), items);
        let written = write_jsonl_file(&base, &items, 10).unwrap();
        assert!(written.to_string_lossy().ends_with(".gz"));
        assert!(!base.exists());
        assert_eq!(read_jsonl_file::<u32>(&base).unwrap(), items);
    }
}
