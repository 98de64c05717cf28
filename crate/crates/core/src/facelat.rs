//! Faces of `HYP_{n+1}` as facet/ray incidence sets: closure, rank, subfaces,
//! interior points and face annulators.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use hashbrown::HashMap;
use once_cell::race::OnceBox;

use crate::bits::Bits;
use crate::delaunay::{annulator, gram_det};
use crate::exact::{int_rank, IncrementalRank};
use crate::hypercone::{facet_catalog, h_eval_int, h_form, pair_count, BVector, CutSet, DistVec};
use crate::schlafli::{ray_inventory, RayInventory, RayKind};
use crate::{Error, Result};

/// Facet/ray incidence of `HYP_{n+1}` over the facet catalog and the ray inventory.
#[derive(Debug)]
pub struct Incidence {
    n: usize,
    facets: Vec<BVector>,
    facet_index: HashMap<BVector, usize>,
    rays: &'static RayInventory,
    facet_rays: Vec<Bits>,
    ray_facets: Vec<Bits>,
}

impl Incidence {
    pub fn build(n: usize) -> Result<Self> {
        let facets: Vec<BVector> = facet_catalog(n)?.facets().cloned().collect();
        let facet_index: HashMap<BVector, usize> = facets.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let rays = ray_inventory(n)?;
        let (nf, nr) = (facets.len(), rays.len());
        let mut ray_facets = Vec::with_capacity(nr);
        for (id, ray) in rays.rays().iter().enumerate() {
            let bits = match ray.kind {
                RayKind::Cut(s) => Bits::from_indices(
                    nf,
                    facets.iter().enumerate().filter(|(_, b)| matches!(b.subset_sum(s.mask()), 0 | 1)).map(|(i, _)| i),
                ),
                RayKind::Schlafli { .. } => {
                    let ann = rays.schlafli_annulator(id).expect("Schläfli ray");
                    let mut bits = Bits::new(nf);
                    for b in ann.iter().filter(|b| !b.is_basic()) {
                        let i = facet_index
                            .get(b)
                            .ok_or_else(|| Error::SelfCheck(format!("annulator element {:?} is not a facet", b.coords())))?;
                        bits.insert(*i);
                    }
                    if bits.count() != 20 {
                        return Err(Error::SelfCheck(format!("Schläfli ray {id} lies on {} facets", bits.count())));
                    }
                    bits
                }
            };
            ray_facets.push(bits);
        }
        let mut facet_rays = alloc::vec![Bits::new(nr); nf];
        for (r, bits) in ray_facets.iter().enumerate() {
            for f in bits.iter() {
                facet_rays[f].insert(r);
            }
        }
        Ok(Incidence { n, facets, facet_index, rays, facet_rays, ray_facets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `N` of the ambient space.
    pub fn dim(&self) -> usize {
        pair_count(self.n)
    }

    pub fn facets(&self) -> &[BVector] {
        &self.facets
    }

    pub fn facet_id(&self, b: &BVector) -> Option<usize> {
        self.facet_index.get(b).copied()
    }

    pub fn rays(&self) -> &'static RayInventory {
        self.rays
    }

    pub fn facet_rays(&self, facet: usize) -> &Bits {
        &self.facet_rays[facet]
    }

    pub fn ray_facets(&self, ray: usize) -> &Bits {
        &self.ray_facets[ray]
    }

    fn span_rank_up_to(&self, rays: &Bits, cap: usize) -> usize {
        let mut r = IncrementalRank::new(self.dim());
        for id in rays.iter() {
            r.insert(&self.rays.ray(id).dist);
            if r.rank() >= cap {
                break;
            }
        }
        r.rank()
    }

    /// Face with the given facet set closed: all rays on those facets, then all facets on those rays.
    pub fn face_of_facets(&self, facets: &Bits) -> Face {
        let mut ray_bits = Bits::full(self.rays.len());
        for h in facets.iter() {
            ray_bits.and_assign(&self.facet_rays[h]);
        }
        self.face_of_rays_closed(ray_bits)
    }

    fn face_of_rays_closed(&self, ray_bits: Bits) -> Face {
        let mut facet_bits = Bits::full(self.facets.len());
        for r in ray_bits.iter() {
            facet_bits.and_assign(&self.ray_facets[r]);
        }
        let rank = self.span_rank_up_to(&ray_bits, self.dim());
        Face { facet_bits, ray_bits, rank }
    }

    /// Whether the rays on facet `facet` span a hyperplane.
    pub fn is_facet_by_rays(&self, facet: usize) -> bool {
        self.span_rank_up_to(&self.facet_rays[facet], self.dim()) == self.dim() - 1
    }

    /// Smallest face containing the given rays.
    pub fn closure(&self, rays: &Bits) -> Result<Face> {
        if rays.count() == 0 {
            return Err(Error::EmptyInput);
        }
        let mut facet_bits = Bits::full(self.facets.len());
        for r in rays.iter() {
            facet_bits.and_assign(&self.ray_facets[r]);
        }
        Ok(self.face_of_facets(&facet_bits))
    }

    /// The whole cone.
    pub fn full_face(&self) -> Face {
        self.face_of_facets(&Bits::new(self.facets.len()))
    }

    /// Smallest face containing an integer point of the cone.
    pub fn face_of_point(&self, d: &[i64]) -> Result<Face> {
        let mut tight = Bits::new(self.facets.len());
        for (i, b) in self.facets.iter().enumerate() {
            match h_eval_int(b, d) {
                0 => tight.insert(i),
                v if v > 0 => return Err(Error::NotHypermetric),
                _ => {}
            }
        }
        Ok(self.face_of_facets(&tight))
    }

    /// All faces of rank `f.rank - 1` contained in `f`, in order of their
    /// smallest new facet.
    pub fn subfaces(&self, f: &Face) -> Vec<Face> {
        let mut out = Vec::new();
        if f.rank < 2 {
            return out;
        }
        let target = f.rank - 1;
        let mut covered = f.facet_bits.clone();
        for h in 0..self.facets.len() {
            if covered.contains(h) {
                continue;
            }
            let rays = f.ray_bits.and(&self.facet_rays[h]);
            if rays.count() < target || self.span_rank_up_to(&rays, target) < target {
                continue;
            }
            let mut lower = f.facet_bits.clone();
            lower.insert(h);
            let mut facet_bits = Bits::full(self.facets.len());
            for r in rays.iter() {
                facet_bits.and_assign(&self.ray_facets[r]);
                if facet_bits == lower {
                    break;
                }
            }
            covered.or_assign(&facet_bits);
            out.push(Face { facet_bits, ray_bits: rays, rank: target });
        }
        out
    }

    /// Sum of the extreme rays of `f`.
    pub fn interior_point(&self, f: &Face) -> Vec<i64> {
        let mut d = alloc::vec![0; self.dim()];
        for r in f.ray_bits.iter() {
            for (x, y) in d.iter_mut().zip(&self.rays.ray(r).dist) {
                *x += y;
            }
        }
        d
    }

    pub fn first_schlafli_ray(&self, f: &Face) -> Option<usize> {
        f.ray_bits.iter().find(|&r| !self.rays.ray(r).is_cut())
    }

    pub fn cuts_of(&self, f: &Face) -> Vec<CutSet> {
        f.ray_bits
            .iter()
            .filter_map(|r| match self.rays.ray(r).kind {
                RayKind::Cut(s) => Some(s),
                RayKind::Schlafli { .. } => None,
            })
            .collect()
    }

    /// Degeneracy, annulator and rank cross-checks of a face.
    pub fn examine(&self, f: &Face) -> Result<FaceData> {
        if f.ray_bits.count() == 0 {
            return Err(Error::EmptyInput);
        }
        let interior = self.interior_point(f);
        let corank = self.dim() - f.rank;
        let ann = if let Some(r) = self.first_schlafli_ray(f) {
            let ann: Vec<BVector> = self
                .rays
                .schlafli_annulator(r)
                .expect("Schläfli ray")
                .into_iter()
                .filter(|b| h_eval_int(b, &interior) == 0)
                .collect();
            if ann.len() != 7 + corank {
                return Err(Error::SelfCheck(format!(
                    "face of corank {corank} through a Schläfli ray has {} annulator elements",
                    ann.len()
                )));
            }
            ann
        } else {
            let cuts = self.cuts_of(f);
            if is_degenerate_cutface(self.n, &cuts) {
                return Ok(FaceData { interior, degenerate: true, ann: Vec::new(), schlafli: false });
            }
            let d = DistVec::from_ints(self.n, &interior)?;
            if gram_det(&d) == crate::exact::rat(0) {
                return Err(Error::SelfCheck("cut face passes the kernel test but is degenerate".into()));
            }
            annulator(&d)?
        };
        let ann_rank = int_rank(self.dim(), ann.iter().map(h_form).collect::<Vec<_>>().iter().map(Vec::as_slice));
        if self.dim() - ann_rank != f.rank {
            return Err(Error::SelfCheck(format!(
                "annulator gives rank {} but the rays span {}",
                self.dim() - ann_rank,
                f.rank
            )));
        }
        let schlafli = self.first_schlafli_ray(f).is_some();
        Ok(FaceData { interior, degenerate: false, ann, schlafli })
    }
}

/// A face: its tight facets, its extreme rays and its dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub facet_bits: Bits,
    pub ray_bits: Bits,
    pub rank: usize,
}

/// What [`Incidence::examine`] learns about a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceData {
    /// Sum of the face's extreme rays.
    pub interior: Vec<i64>,
    pub degenerate: bool,
    /// `Ann(F)`; empty for degenerate faces.
    pub ann: Vec<BVector>,
    /// Whether the face contains a Schläfli ray.
    pub schlafli: bool,
}

/// Whether a face generated by these cuts of `{0, ..., n}` is degenerate: the
/// system `b(S) = 0` for every cut, `sum b = 0` has a nonzero solution.
pub fn is_degenerate_cutface(n: usize, cuts: &[CutSet]) -> bool {
    let mut rows: Vec<Vec<i64>> =
        cuts.iter().map(|s| (0..=n).map(|i| (s.mask() >> i & 1) as i64).collect()).collect();
    rows.push(alloc::vec![1; n + 1]);
    int_rank(n + 1, rows.iter().map(Vec::as_slice)) < n + 1
}

static INCIDENCES: [OnceBox<Incidence>; 5] =
    [OnceBox::new(), OnceBox::new(), OnceBox::new(), OnceBox::new(), OnceBox::new()];

/// Shared incidence structure for `n` in `2..=6`.
pub fn incidence(n: usize) -> Result<&'static Incidence> {
    if !(2..=6).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    INCIDENCES[n - 2].get_or_try_init(|| Incidence::build(n).map(Box::new))
}
