//! Extreme rays of `HYP_{n+1}`: the nonzero cuts, plus for `n = 6` the
//! distance vectors of all affine bases of the Schläfli polytope.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

use super::{affine_bases, schlafli_model, BasisOrbit};
use crate::hypercone::{all_cuts, cut_ints, h_form, BVector, CutSet, DistVec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayKind {
    Cut(CutSet),
    /// Basis class `class` relabeled so that point `i` is point `perm[i]` of
    /// the class representative.
    Schlafli { class: usize, perm: [u8; 7] },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub kind: RayKind,
    /// Orbit under coordinate permutations: cut orbits first, by size of the
    /// smaller side, then one orbit per basis class.
    pub orbit: usize,
    pub dist: Vec<i64>,
}

impl Ray {
    pub fn is_cut(&self) -> bool {
        matches!(self.kind, RayKind::Cut(_))
    }

    pub fn dist_vec(&self, n: usize) -> DistVec {
        DistVec::from_ints(n, &self.dist).expect("stored with the right length")
    }
}

#[derive(Clone, Debug)]
pub struct RayInventory {
    n: usize,
    rays: Vec<Ray>,
    cut_orbits: usize,
    classes: Vec<BasisOrbit>,
    /// Annulator of each class representative, indexed by Schläfli vertex.
    class_ann: Vec<Vec<BVector>>,
    class_forms: Vec<Vec<Vec<i64>>>,
}

impl RayInventory {
    /// All extreme rays for `n` in `2..=6`. Below `n = 6` the cone is the cut cone.
    pub fn build(n: usize) -> Result<Self> {
        if !(2..=6).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let cut_orbits = (n + 1) / 2;
        let mut rays: Vec<Ray> = all_cuts(n)
            .into_iter()
            .map(|s| Ray { kind: RayKind::Cut(s), orbit: s.orbit_size_class() - 1, dist: cut_ints(&s) })
            .collect();
        let mut classes = Vec::new();
        let mut class_ann = Vec::new();
        if n == 6 {
            let model = schlafli_model()?;
            classes = affine_bases()?.to_vec();
            let perms = crate::hypercone::distinct_permutations(&[0, 1, 2, 3, 4, 5, 6]);
            let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
            for (class, orbit) in classes.iter().enumerate() {
                class_ann.push(model.barycentric(&orbit.representative)?);
                let before = rays.len();
                for p in &perms {
                    let perm: Vec<usize> = p.iter().map(|&x| x as usize).collect();
                    let d = orbit.dist.permuted(&perm);
                    let ints: Vec<i64> = d
                        .values()
                        .iter()
                        .map(|r| r.to_integer().try_into().expect("distances are 2 or 4"))
                        .collect();
                    if seen.insert(ints.clone()) {
                        let mut pa = [0u8; 7];
                        for (k, &x) in perm.iter().enumerate() {
                            pa[k] = x as u8;
                        }
                        rays.push(Ray { kind: RayKind::Schlafli { class, perm: pa }, orbit: cut_orbits + class, dist: ints });
                    }
                }
                if (rays.len() - before) as u64 != orbit.sym7_orbit_size {
                    return Err(Error::SelfCheck("relabeling orbit size mismatch".into()));
                }
            }
        }
        let class_forms = class_ann.iter().map(|ann| ann.iter().map(h_form).collect()).collect();
        Ok(RayInventory { n, rays, cut_orbits, classes, class_ann, class_forms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ray(&self, id: usize) -> &Ray {
        &self.rays[id]
    }

    pub fn cut_count(&self) -> usize {
        self.rays.iter().filter(|r| r.is_cut()).count()
    }

    pub fn cut_orbit_count(&self) -> usize {
        self.cut_orbits
    }

    pub fn orbit_count(&self) -> usize {
        self.cut_orbits + self.classes.len()
    }

    pub fn basis_classes(&self) -> &[BasisOrbit] {
        &self.classes
    }

    /// `Ann` of a basis class representative, indexed by Schläfli vertex.
    pub fn class_annulator(&self, class: usize) -> &[BVector] {
        &self.class_ann[class]
    }

    /// The forms `H(b)` for [`Self::class_annulator`].
    pub fn class_forms(&self, class: usize) -> &[Vec<i64>] {
        &self.class_forms[class]
    }

    /// `Ann` of a Schläfli ray, indexed by Schläfli vertex; `None` for cuts.
    pub fn schlafli_annulator(&self, id: usize) -> Option<Vec<BVector>> {
        match self.rays[id].kind {
            RayKind::Cut(_) => None,
            RayKind::Schlafli { class, perm } => {
                let perm: Vec<usize> = perm.iter().map(|&x| x as usize).collect();
                Some(self.class_ann[class].iter().map(|b| b.permuted(&perm)).collect())
            }
        }
    }
}

static INVENTORIES: [OnceBox<RayInventory>; 5] =
    [OnceBox::new(), OnceBox::new(), OnceBox::new(), OnceBox::new(), OnceBox::new()];

/// Shared inventory for `n` in `2..=6`.
pub fn ray_inventory(n: usize) -> Result<&'static RayInventory> {
    if !(2..=6).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    INVENTORIES[n - 2].get_or_try_init(|| RayInventory::build(n).map(Box::new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::is_nondegenerate;
    use crate::hypercone::{h_eval_int, pair_count};

    #[test]
    fn cut_cone_inventories() {
        for n in 2..=5 {
            let inv = ray_inventory(n).unwrap();
            assert_eq!(inv.len(), (1 << n) - 1);
            assert_eq!(inv.orbit_count(), (n + 1) / 2);
        }
    }

    #[test]
    fn hyp7_inventory() {
        let inv = ray_inventory(6).unwrap();
        assert_eq!(inv.cut_count(), 63);
        assert_eq!(inv.cut_orbit_count(), 3);
        assert_eq!(inv.orbit_count(), 29);
        let expected: u64 = inv.basis_classes().iter().map(|c| c.sym7_orbit_size).sum();
        assert_eq!((inv.len() - 63) as u64, expected);
        let distinct: BTreeSet<&Vec<i64>> = inv.rays().iter().map(|r| &r.dist).collect();
        assert_eq!(distinct.len(), inv.len());
        for r in inv.rays().iter().filter(|r| r.is_cut()) {
            assert!(!is_nondegenerate(&r.dist_vec(6)).unwrap());
        }
        // a spread of Schläfli rays: permuted annulators still vanish on the permuted vector
        for id in (63..inv.len()).step_by(997) {
            let ray = inv.ray(id);
            assert_eq!(ray.dist.len(), pair_count(6));
            let ann = inv.schlafli_annulator(id).unwrap();
            assert!(ann.iter().all(|b| h_eval_int(b, &ray.dist) == 0));
            assert!(is_nondegenerate(&ray.dist_vec(6)).unwrap());
        }
    }
}
