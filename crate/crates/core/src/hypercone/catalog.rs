use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

use super::{geometric_partner, BVector};
use crate::{Error, Result};

/// Facet orbit representatives of `HYP_{n+1}` for `n = 2..=6`, expanded under
/// all coordinate permutations.
#[derive(Clone, Debug)]
pub struct FacetCatalog {
    n: usize,
    orbit_reps: Vec<BVector>,
    orbits: Vec<Vec<BVector>>,
}

const REPS_6: [[i64; 7]; 14] = [
    [1, 1, -1, 0, 0, 0, 0],
    [1, 1, 1, -1, -1, 0, 0],
    [1, 1, 1, 1, -1, -2, 0],
    [2, 1, 1, -1, -1, -1, 0],
    [1, 1, 1, 1, -1, -1, -1],
    [2, 1, 1, 1, -1, -1, -2],
    [2, 2, 1, -1, -1, -1, -1],
    [1, 1, 1, 1, 1, -2, -2],
    [3, 1, 1, -1, -1, -1, -1],
    [1, 1, 1, 1, 1, -1, -3],
    [2, 2, 1, 1, -1, -1, -3],
    [3, 1, 1, 1, -1, -2, -2],
    [3, 2, 1, -1, -1, -1, -2],
    [2, 1, 1, 1, 1, -2, -3],
];

/// Number of leading entries of `REPS_6` whose zero-truncation gives the facets for each `n`.
fn reps_for(n: usize) -> Result<Vec<BVector>> {
    let count = match n {
        2 | 3 => 1,
        4 => 2,
        5 => 4,
        6 => 14,
        _ => return Err(Error::UnsupportedDimension(n)),
    };
    REPS_6[..count]
        .iter()
        .map(|r| {
            let (head, tail) = r.split_at(n + 1);
            debug_assert!(tail.iter().all(|&x| x == 0));
            BVector::new(head.to_vec())
        })
        .collect()
}

/// Distinct permutations of `v` in increasing lexicographic order.
pub fn distinct_permutations(v: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

impl FacetCatalog {
    pub fn new(n: usize) -> Result<Self> {
        let orbit_reps = reps_for(n)?;
        let orbits = orbit_reps
            .iter()
            .map(|r| {
                distinct_permutations(r.coords())
                    .into_iter()
                    .map(|c| BVector::new(c).expect("permutation keeps the sum"))
                    .collect()
            })
            .collect();
        Ok(FacetCatalog { n, orbit_reps, orbits })
    }

    /// Catalog with orbit representatives replaced (used to exercise verification failures).
    pub fn with_reps(n: usize, orbit_reps: Vec<BVector>) -> Result<Self> {
        if let Some(b) = orbit_reps.iter().find(|b| b.n() != n) {
            return Err(Error::Dimension { expected: n + 1, found: b.n() + 1 });
        }
        let orbits = orbit_reps
            .iter()
            .map(|r| {
                distinct_permutations(r.coords())
                    .into_iter()
                    .map(|c| BVector::new(c).expect("permutation keeps the sum"))
                    .collect()
            })
            .collect();
        Ok(FacetCatalog { n, orbit_reps, orbits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn orbit_reps(&self) -> &[BVector] {
        &self.orbit_reps
    }

    pub fn orbits(&self) -> &[Vec<BVector>] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All facet vectors, orbit by orbit; positions in this iterator are facet ids.
    pub fn facets(&self) -> impl Iterator<Item = &BVector> {
        self.orbits.iter().flatten()
    }

    /// Orbit index of each facet id.
    pub fn orbit_of_facets(&self) -> Vec<usize> {
        self.orbits.iter().enumerate().flat_map(|(k, o)| core::iter::repeat(k).take(o.len())).collect()
    }

    /// Orbit index of a vector, if it is a facet.
    pub fn orbit_of(&self, b: &BVector) -> Option<usize> {
        let mut key = b.coords().to_vec();
        key.sort_unstable();
        self.orbit_reps.iter().position(|r| {
            let mut k = r.coords().to_vec();
            k.sort_unstable();
            k == key
        })
    }

    /// True iff `H(b) d <= 0` for every facet.
    pub fn is_hypermetric(&self, d: &super::DistVec) -> Result<bool> {
        if d.n() != self.n {
            return Err(Error::Dimension { expected: self.n, found: d.n() });
        }
        for b in self.facets() {
            if super::h_eval(b, d)? > crate::exact::rat(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

static CATALOGS: [OnceBox<FacetCatalog>; 5] =
    [OnceBox::new(), OnceBox::new(), OnceBox::new(), OnceBox::new(), OnceBox::new()];

/// Shared, lazily built catalog for `n` in `2..=6`.
pub fn facet_catalog(n: usize) -> Result<&'static FacetCatalog> {
    if !(2..=6).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(CATALOGS[n - 2].get_or_init(|| alloc::boxed::Box::new(FacetCatalog::new(n).expect("supported n"))))
}

/// Merges facet orbits related by a coordinate permutation composed with
/// [`geometric_partner`]. Returns the classes as sorted lists of orbit indices.
pub fn partner_classes(cat: &FacetCatalog) -> Vec<Vec<usize>> {
    let k = cat.orbit_reps().len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (o, rep) in cat.orbit_reps().iter().enumerate() {
        for i in 0..rep.coords().len() {
            if rep.coords()[i] != 1 {
                continue;
            }
            let partner = geometric_partner(rep, i).expect("coordinate is 1");
            if let Some(q) = cat.orbit_of(&partner) {
                let (a, b) = (find(&mut parent, o), find(&mut parent, q));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for o in 0..k {
        let r = find(&mut parent, o);
        classes.entry(r).or_default().push(o);
    }
    classes.into_values().collect()
}
