//! Level-by-level classification of the faces of `HYP_{n+1}`.
//!
//! Level `c` holds the faces of corank `c` that are facets of some type
//! representative of level `c - 1`. Each face is examined (degeneracy,
//! annulator, rank cross-check), non-degenerate faces are certified, and the
//! certificate classes are the combinatorial types of the level.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, ensure, Context, Result};
use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use rayon::prelude::*;

use hypercone_core::bits::Bits;
use hypercone_core::delaunay::annulator;
use hypercone_core::equiv::{cut_certificate, schlafli_certificate_with, schlafli_mask_key, Certificate};
use hypercone_core::facelat::{incidence, is_degenerate_cutface, Face, FaceData, Incidence};
use hypercone_core::hypercone::{pair_count, BVector, DistVec};

use crate::checkpoint::{self, FaceRecord, LevelSummary, Manifest, TypeRecord};
use crate::formats::inventory_hash;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyLevel {
    /// Built-in per-face cross-checks only.
    Fast,
    /// Also expand every degenerate face to audit heredity, and recompute
    /// annulators of Schläfli faces by sphere enumeration.
    Full,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub max_corank: usize,
    pub checkpoint_dir: Option<PathBuf>,
    pub threads: usize,
    pub verify: VerifyLevel,
    /// Wall-time cap per level; a level that runs over is discarded and the run stops.
    pub budget: Option<Duration>,
}

impl RunConfig {
    pub fn new(n: usize, max_corank: usize) -> Self {
        RunConfig { n, max_corank, checkpoint_dir: None, threads: 1, verify: VerifyLevel::Fast, budget: None }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!((2..=6).contains(&self.n), "n must be in 2..=6, got {}", self.n);
        let big_n = pair_count(self.n);
        ensure!(self.max_corank < big_n, "max corank must be below {big_n}");
        ensure!(self.threads >= 1, "need at least one thread");
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Examined {
    pub face: Face,
    pub data: FaceData,
    pub cert: Option<Certificate>,
}

#[derive(Clone, Debug)]
pub struct TypeClass {
    pub cert: Certificate,
    /// Index of the representative (smallest facet set) in the level's faces.
    pub rep: usize,
    pub members: Vec<usize>,
    /// Whether every facet of the representative is degenerate; `None` until known.
    pub maximal: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Level {
    pub corank: usize,
    pub rank: usize,
    /// Sorted by facet set.
    pub faces: Vec<Examined>,
    /// Sorted by representative.
    pub types: Vec<TypeClass>,
}

impl Level {
    pub fn rep(&self, t: &TypeClass) -> &Examined {
        &self.faces[t.rep]
    }

    pub fn degenerate_count(&self) -> usize {
        self.faces.iter().filter(|e| e.data.degenerate).count()
    }
}

#[derive(Clone, Debug)]
pub struct Run {
    pub n: usize,
    pub levels: Vec<Level>,
    pub heredity_violations: usize,
    /// Corank of the level abandoned because of the time budget.
    pub budget_stop: Option<usize>,
}

impl Run {
    pub fn type_counts(&self) -> Vec<(usize, usize)> {
        self.levels.iter().map(|l| (l.rank, l.types.len())).collect()
    }
}

struct Ctx<'a> {
    inc: &'a Incidence,
    verify: VerifyLevel,
    keys: Mutex<HashMap<u32, Vec<u8>>>,
    deadline: Option<Instant>,
    expired: AtomicBool,
}

impl Ctx<'_> {
    fn check_time(&self) -> Result<()> {
        if self.expired.load(Ordering::Relaxed) || self.deadline.is_some_and(|d| Instant::now() > d) {
            self.expired.store(true, Ordering::Relaxed);
            bail!(BudgetExceeded);
        }
        Ok(())
    }

    fn mask_key(&self, mask: u32) -> hypercone_core::Result<Vec<u8>> {
        if let Some(k) = self.keys.lock().expect("poisoned").get(&mask) {
            return Ok(k.clone());
        }
        let k = schlafli_mask_key(mask)?;
        self.keys.lock().expect("poisoned").insert(mask, k.clone());
        Ok(k)
    }

    fn examine(&self, face: Face) -> Result<Examined> {
        self.check_time()?;
        let data = self.inc.examine(&face)?;
        if data.degenerate {
            ensure!(!data.schlafli, "degenerate face through a Schläfli ray");
            return Ok(Examined { face, data, cert: None });
        }
        let cert = if data.schlafli {
            if self.verify == VerifyLevel::Full {
                let mut direct = annulator(&DistVec::from_ints(self.inc.n(), &data.interior)?)?;
                let mut filtered = data.ann.clone();
                direct.sort();
                filtered.sort();
                ensure!(direct == filtered, "Schläfli-face annulator disagrees with sphere enumeration");
            }
            schlafli_certificate_with(self.inc, &face, &data.interior, |m| self.mask_key(m))?
        } else {
            cut_certificate(self.inc, &face, &data.ann)?
        };
        Ok(Examined { face, data, cert: Some(cert) })
    }

    /// Number of non-degenerate facets below a degenerate face.
    fn heredity_violations(&self, e: &Examined) -> Result<usize> {
        if !e.data.degenerate {
            return Ok(0);
        }
        self.check_time()?;
        let n = self.inc.n();
        Ok(self
            .inc
            .subfaces(&e.face)
            .iter()
            .filter(|f| self.inc.first_schlafli_ray(f).is_some() || !is_degenerate_cutface(n, &self.inc.cuts_of(f)))
            .count())
    }
}

#[derive(Debug)]
struct BudgetExceeded;

impl std::fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("time budget exceeded")
    }
}

impl std::error::Error for BudgetExceeded {}

fn group_types(faces: &[Examined]) -> Vec<TypeClass> {
    let mut by_cert: BTreeMap<&Certificate, Vec<usize>> = BTreeMap::new();
    for (i, e) in faces.iter().enumerate() {
        if let Some(c) = &e.cert {
            by_cert.entry(c).or_default().push(i);
        }
    }
    let mut types: Vec<TypeClass> = by_cert
        .into_iter()
        .map(|(cert, members)| TypeClass { cert: cert.clone(), rep: members[0], members, maximal: None })
        .collect();
    types.sort_by_key(|t| t.rep);
    types
}

pub fn face_record(corank: usize, e: &Examined) -> FaceRecord {
    FaceRecord {
        corank,
        facet_bits_hex: e.face.facet_bits.to_hex(),
        rank: e.face.rank,
        degenerate: e.data.degenerate,
        ann: e.data.ann.iter().map(|b| b.coords().to_vec()).collect(),
        scheme: e.cert.as_ref().map(|c| c.scheme.name().to_string()),
        cert_b64: e.cert.as_ref().map(|c| B64.encode(c.to_bytes())),
    }
}

pub fn type_record(level: &Level, t: &TypeClass) -> TypeRecord {
    let rep = level.rep(t);
    TypeRecord {
        corank: level.corank,
        rank: level.rank,
        scheme: t.cert.scheme.name().to_string(),
        cert_b64: B64.encode(t.cert.to_bytes()),
        ann_size: rep.data.ann.len(),
        vertex_count: rep.data.ann.len(),
        facet_bits_hex: rep.face.facet_bits.to_hex(),
        faces: t.members.len(),
        extreme: level.rank == 1,
        maximal: t.maximal,
    }
}

fn examined_from_record(inc: &Incidence, r: &FaceRecord) -> Result<Examined> {
    let bits = Bits::from_hex(inc.facets().len(), &r.facet_bits_hex).ok_or_else(|| anyhow!("bad facet bits"))?;
    let face = inc.face_of_facets(&bits);
    ensure!(face.facet_bits == bits && face.rank == r.rank, "checkpoint face is not closed or has the wrong rank");
    let ann = r.ann.iter().map(|c| BVector::new(c.clone())).collect::<hypercone_core::Result<Vec<_>>>()?;
    let cert = match &r.cert_b64 {
        Some(s) => Some(Certificate::from_bytes(&B64.decode(s)?).ok_or_else(|| anyhow!("bad certificate"))?),
        None => None,
    };
    let data = FaceData {
        interior: inc.interior_point(&face),
        degenerate: r.degenerate,
        ann,
        schlafli: inc.first_schlafli_ray(&face).is_some(),
    };
    Ok(Examined { face, data, cert })
}

fn level_summary(l: &Level) -> LevelSummary {
    LevelSummary {
        corank: l.corank,
        rank: l.rank,
        faces: l.faces.len(),
        degenerate: l.degenerate_count(),
        types: l.types.len(),
    }
}

fn load_levels(inc: &Incidence, cfg: &RunConfig, hash: &str) -> Result<(Vec<Level>, usize)> {
    let Some(dir) = &cfg.checkpoint_dir else { return Ok((Vec::new(), 0)) };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let Some(manifest) = checkpoint::read_manifest(dir)? else { return Ok((Vec::new(), 0)) };
    ensure!(manifest.n == cfg.n, "checkpoint is for n = {}, not {}", manifest.n, cfg.n);
    ensure!(manifest.inventory_hash == hash, "checkpoint was made with a different facet/ray inventory");
    let mut levels = Vec::new();
    for s in &manifest.levels {
        let records = checkpoint::read_faces(dir, s.corank)?;
        let faces = records.iter().map(|r| examined_from_record(inc, r)).collect::<Result<Vec<_>>>()?;
        let mut types = group_types(&faces);
        let stored = checkpoint::read_types(dir, s.corank)?;
        ensure!(stored.len() == types.len() && types.len() == s.types, "checkpoint level {} is inconsistent", s.corank);
        for (t, rec) in types.iter_mut().zip(&stored) {
            ensure!(B64.encode(t.cert.to_bytes()) == rec.cert_b64, "checkpoint types out of order");
            t.maximal = rec.maximal;
        }
        levels.push(Level { corank: s.corank, rank: s.rank, faces, types });
    }
    Ok((levels, manifest.heredity_violations))
}

fn save(cfg: &RunConfig, hash: &str, levels: &[Level], violations: usize, new_level: bool) -> Result<()> {
    let Some(dir) = &cfg.checkpoint_dir else { return Ok(()) };
    let last = levels.last().expect("at least one level");
    if new_level {
        let records: Vec<FaceRecord> = last.faces.iter().map(|e| face_record(last.corank, e)).collect();
        checkpoint::write_faces(dir, last.corank, &records)?;
    }
    for l in levels.iter().rev().take(2) {
        let types: Vec<TypeRecord> = l.types.iter().map(|t| type_record(l, t)).collect();
        checkpoint::write_types(dir, l.corank, &types)?;
    }
    let manifest = Manifest {
        n: cfg.n,
        inventory_hash: hash.to_string(),
        levels: levels.iter().map(level_summary).collect(),
        heredity_violations: violations,
    };
    checkpoint::write_manifest(dir, &manifest)
}

/// Runs (or resumes) the classification up to `cfg.max_corank`.
pub fn classify(cfg: &RunConfig, mut log: impl FnMut(&str)) -> Result<Run> {
    cfg.validate()?;
    let inc = incidence(cfg.n)?;
    let hash = inventory_hash(inc);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?;
    let (mut levels, mut violations) = load_levels(inc, cfg, &hash)?;
    if !levels.is_empty() {
        log(&format!("resumed {} completed level(s)", levels.len()));
    }
    let big_n = pair_count(cfg.n);
    let mut budget_stop = None;
    while levels.last().is_none_or(|l| l.corank < cfg.max_corank) {
        let corank = levels.len();
        let start = Instant::now();
        let ctx = Ctx {
            inc,
            verify: cfg.verify,
            keys: Mutex::new(HashMap::new()),
            deadline: cfg.budget.map(|b| start + b),
            expired: AtomicBool::new(false),
        };
        let outcome = pool.install(|| next_level(&ctx, levels.last(), corank));
        let (level, children_of, level_violations) = match outcome {
            Ok(x) => x,
            Err(e) if e.is::<BudgetExceeded>() => {
                log(&format!("corank {corank}: time budget exhausted, stopping after corank {}", corank as i64 - 1));
                budget_stop = Some(corank);
                break;
            }
            Err(e) => return Err(e),
        };
        if level_violations > 0 {
            violations += level_violations;
            save(cfg, &hash, &levels, violations, false)?;
            bail!("heredity violation: {level_violations} non-degenerate face(s) below degenerate faces at corank {corank}");
        }
        if let Some(prev) = levels.last_mut() {
            for (t, kids) in prev.types.iter_mut().zip(&children_of) {
                t.maximal = Some(kids.iter().all(|&k| level.faces[k].data.degenerate));
            }
        }
        let done = level.faces.is_empty();
        if !done {
            log(&format!(
                "corank {corank} (rank {}): {} faces, {} degenerate, {} types [{:.1}s]",
                level.rank,
                level.faces.len(),
                level.degenerate_count(),
                level.types.len(),
                start.elapsed().as_secs_f64()
            ));
            levels.push(level);
        }
        if let Some(last) = levels.last_mut() {
            if last.rank == 1 {
                last.types.iter_mut().for_each(|t| t.maximal = Some(true));
            }
        }
        save(cfg, &hash, &levels, violations, !done)?;
        if done || corank + 1 >= big_n {
            break;
        }
    }
    Ok(Run { n: cfg.n, levels, heredity_violations: violations, budget_stop })
}

/// Computes level `corank` from the previous one. Also returns, for each type
/// of the previous level, the indices of its representative's facets.
fn next_level(ctx: &Ctx, prev: Option<&Level>, corank: usize) -> Result<(Level, Vec<Vec<usize>>, usize)> {
    let big_n = ctx.inc.dim();
    let Some(prev) = prev else {
        let full = ctx.examine(ctx.inc.full_face())?;
        let faces = vec![full];
        let types = group_types(&faces);
        return Ok((Level { corank: 0, rank: big_n, faces, types }, Vec::new(), 0));
    };
    let per_parent: Vec<Vec<Face>> = prev
        .types
        .par_iter()
        .map(|t| {
            ctx.check_time()?;
            Ok(ctx.inc.subfaces(&prev.rep(t).face))
        })
        .collect::<Result<_>>()?;
    let mut unique: BTreeMap<Bits, Face> = BTreeMap::new();
    for f in per_parent.iter().flatten() {
        unique.entry(f.facet_bits.clone()).or_insert_with(|| f.clone());
    }
    let index: HashMap<&Bits, usize> = unique.keys().enumerate().map(|(i, b)| (b, i)).collect();
    let children_of: Vec<Vec<usize>> =
        per_parent.iter().map(|fs| fs.iter().map(|f| index[&f.facet_bits]).collect()).collect();
    drop(index);
    let faces: Vec<Examined> =
        unique.into_values().collect::<Vec<_>>().into_par_iter().map(|f| ctx.examine(f)).collect::<Result<_>>()?;
    let violations: usize = if ctx.verify == VerifyLevel::Full {
        faces.par_iter().map(|e| ctx.heredity_violations(e)).collect::<Result<Vec<_>>>()?.into_iter().sum()
    } else {
        0
    };
    let types = group_types(&faces);
    let rank = big_n - corank;
    Ok((Level { corank, rank, faces, types }, children_of, violations))
}
