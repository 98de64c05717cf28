//! Certificates of geometric equivalence for faces.
//!
//! A face through a Schläfli ray `d_B` is described by the set of Schläfli
//! vertices whose barycentric vectors in `B` stay in the face annulator; its
//! certificate is the least canonical form of that colored skeleton over all
//! Schläfli rays of the face. A face spanned by cuts is described by how its
//! cuts split its annulator: each annulator element is a vertex, each distinct
//! split contributes two adjacent "side" vertices, and an element is joined to
//! the side containing it.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::canon::{canonical_form, ColoredGraph};
use crate::facelat::{Face, FaceData, Incidence};
use crate::hypercone::{pairs, pair_index, BVector};
use crate::schlafli::{schlafli_model, RayKind, VERTICES};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Schlafli,
    CutGraph,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Schlafli => "schlafli",
            Scheme::CutGraph => "cutgraph",
        }
    }

    fn tag(self) -> u8 {
        match self {
            Scheme::Schlafli => 1,
            Scheme::CutGraph => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    pub scheme: Scheme,
    pub bytes: Vec<u8>,
}

impl Certificate {
    /// Scheme tag followed by the canonical bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.bytes.len() + 1);
        out.push(self.scheme.tag());
        out.extend_from_slice(&self.bytes);
        out
    }

    pub fn from_bytes(raw: &[u8]) -> Option<Certificate> {
        let (&tag, rest) = raw.split_first()?;
        let scheme = match tag {
            1 => Scheme::Schlafli,
            2 => Scheme::CutGraph,
            _ => return None,
        };
        Some(Certificate { scheme, bytes: rest.to_vec() })
    }
}

/// For every Schläfli ray of `f`, the 27-bit mask of vertices whose
/// barycentric vector annihilates `interior`.
pub fn schlafli_masks(inc: &Incidence, f: &Face, interior: &[i64]) -> Result<BTreeSet<u32>> {
    let inv = inc.rays();
    let n = inc.n();
    let mut masks = BTreeSet::new();
    let mut moved = alloc::vec![0i64; interior.len()];
    for r in f.ray_bits.iter() {
        let RayKind::Schlafli { class, perm } = inv.ray(r).kind else { continue };
        // H(b o perm) d = H(b) d', with d'(perm i, perm j) = d(i, j)
        for (k, (i, j)) in pairs(n).enumerate() {
            moved[pair_index(n, perm[i] as usize, perm[j] as usize)] = interior[k];
        }
        let mut mask = 0u32;
        for (v, form) in inv.class_forms(class).iter().enumerate() {
            if form.iter().zip(&moved).map(|(a, b)| a * b).sum::<i64>() == 0 {
                mask |= 1 << v;
            }
        }
        masks.insert(mask);
    }
    if masks.is_empty() {
        return Err(Error::NoSchlafliRay);
    }
    Ok(masks)
}

/// Canonical key of the skeleton with the vertices of `mask` colored.
pub fn schlafli_mask_key(mask: u32) -> Result<Vec<u8>> {
    Ok(schlafli_model()?.mask_key(mask))
}

/// Certificate of a face through at least one Schläfli ray; `key` maps a
/// vertex mask to its canonical key (pass [`schlafli_mask_key`] or a cached version).
pub fn schlafli_certificate_with(
    inc: &Incidence,
    f: &Face,
    interior: &[i64],
    mut key: impl FnMut(u32) -> Result<Vec<u8>>,
) -> Result<Certificate> {
    let mut best: Option<Vec<u8>> = None;
    for m in schlafli_masks(inc, f, interior)? {
        let k = key(m)?;
        if best.as_ref().is_none_or(|b| k < *b) {
            best = Some(k);
        }
    }
    Ok(Certificate { scheme: Scheme::Schlafli, bytes: best.expect("at least one mask") })
}

pub fn schlafli_certificate(inc: &Incidence, f: &Face, interior: &[i64]) -> Result<Certificate> {
    schlafli_certificate_with(inc, f, interior, schlafli_mask_key)
}

/// Vertex mask of `S(F, d_B)` for a single Schläfli ray, for inspection.
pub fn schlafli_subset(inc: &Incidence, ray: usize, ann: &[BVector]) -> Result<u32> {
    let full = inc.rays().schlafli_annulator(ray).ok_or(Error::WrongScheme)?;
    let set: BTreeSet<&BVector> = ann.iter().collect();
    Ok((0..VERTICES).filter(|&v| set.contains(&full[v])).fold(0, |m, v| m | 1 << v))
}

/// Certificate of a non-degenerate face spanned by cuts.
pub fn cut_certificate(inc: &Incidence, f: &Face, ann: &[BVector]) -> Result<Certificate> {
    if inc.first_schlafli_ray(f).is_some() {
        return Err(Error::WrongScheme);
    }
    if ann.is_empty() {
        return Err(Error::MissingAnnulator);
    }
    let mut splits: BTreeSet<Vec<bool>> = BTreeSet::new();
    for s in inc.cuts_of(f) {
        let mut side: Vec<bool> = Vec::with_capacity(ann.len());
        for b in ann {
            match b.subset_sum(s.mask()) {
                0 => side.push(false),
                1 => side.push(true),
                _ => return Err(Error::SelfCheck("cut does not split the annulator".into())),
            }
        }
        if side[0] {
            side.iter_mut().for_each(|x| *x = !*x);
        }
        splits.insert(side);
    }
    let m = ann.len();
    let mut g = ColoredGraph::new(m + 2 * splits.len());
    for (k, side) in splits.iter().enumerate() {
        let (lo, hi) = (m + 2 * k, m + 2 * k + 1);
        g.set_color(lo, 1);
        g.set_color(hi, 1);
        g.add_edge(lo, hi);
        for (i, &s) in side.iter().enumerate() {
            g.add_edge(i, if s { hi } else { lo });
        }
    }
    Ok(Certificate { scheme: Scheme::CutGraph, bytes: canonical_form(&g).bytes })
}

/// Certificate of a non-degenerate face in whichever scheme applies.
pub fn face_certificate(inc: &Incidence, f: &Face, data: &FaceData) -> Result<Certificate> {
    if data.degenerate {
        return Err(Error::Degenerate);
    }
    if data.schlafli {
        schlafli_certificate(inc, f, &data.interior)
    } else {
        cut_certificate(inc, f, &data.ann)
    }
}
