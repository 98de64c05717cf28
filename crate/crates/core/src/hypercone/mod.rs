//! Hypermetric vectors, distance vectors, cuts and the forms `H(b)`.
//!
//! Distance vectors are indexed by unordered pairs `(i, j)`, `0 <= i < j <= n`,
//! in lexicographic order: `(0,1), (0,2), ..., (0,n), (1,2), ..., (n-1,n)`.
//! Every file format in the workspace uses this order.

mod catalog;

pub use catalog::{distinct_permutations, facet_catalog, partner_classes, FacetCatalog};

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::exact::{rat, Rat};
use crate::{Error, Result};

/// Number of pairs `N = (n+1 choose 2)`.
pub const fn pair_count(n: usize) -> usize {
    (n + 1) * n / 2
}

/// Position of the pair `{i, j}` (any order, `i != j`).
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j <= n && i != j);
    // pairs before row i: sum_{k<i} (n - k)
    i * (2 * n + 1 - i) / 2 + (j - i - 1)
}

/// All pairs in storage order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

/// Dimension parameter `n` such that `(n+1 choose 2) = len`.
pub fn n_from_pair_count(len: usize) -> Option<usize> {
    (1..64).find(|&n| pair_count(n) == len)
}

/// Integer vector `b` of length `n+1` with coordinate sum 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BVector(Vec<i64>);

impl BVector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        let s: i64 = coords.iter().sum();
        if s != 1 {
            return Err(Error::CoordinateSum(s));
        }
        Ok(BVector(coords))
    }

    /// The basic vector `e_i` of length `n + 1`.
    pub fn basic(n: usize, i: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[i] = 1;
        BVector(c)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    /// The dimension parameter `n` (length minus one).
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_basic(&self) -> bool {
        self.0.iter().filter(|&&x| x != 0).count() == 1
    }

    /// `b(S)` for a subset given as a bitmask over `0..=n`.
    pub fn subset_sum(&self, mask: u64) -> i64 {
        self.0.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).sum()
    }

    pub fn permuted(&self, perm: &[usize]) -> BVector {
        // result[i] = b[perm[i]]
        BVector(perm.iter().map(|&p| self.0[p]).collect())
    }
}

/// Rational distance vector, one entry per pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistVec {
    n: usize,
    d: Vec<Rat>,
}

impl DistVec {
    pub fn new(n: usize, d: Vec<Rat>) -> Result<Self> {
        if d.len() != pair_count(n) {
            return Err(Error::Dimension { expected: pair_count(n), found: d.len() });
        }
        Ok(DistVec { n, d })
    }

    pub fn from_ints(n: usize, d: &[i64]) -> Result<Self> {
        Self::new(n, d.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        DistVec { n, d: vec![Rat::zero(); pair_count(n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Rat] {
        &self.d
    }

    /// `d(i, j)` with `d(i, i) = 0`.
    pub fn get(&self, i: usize, j: usize) -> Rat {
        if i == j {
            Rat::zero()
        } else {
            self.d[pair_index(self.n, i, j)].clone()
        }
    }

    /// Applies a relabeling of the points: `result(i, j) = d(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> DistVec {
        let d = pairs(self.n).map(|(i, j)| self.get(perm[i], perm[j])).collect();
        DistVec { n: self.n, d }
    }
}

/// Subset of `{0, ..., n}` stored by its canonical representative, the side
/// not containing 0 (cuts of complementary sets coincide).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutSet {
    n: usize,
    mask: u64,
}

impl CutSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mask = members.into_iter().fold(0u64, |m, i| m | 1 << i);
        Self::from_mask(n, mask)
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        let all = (1u64 << (n + 1)) - 1;
        let mask = mask & all;
        let mask = if mask & 1 == 1 { all & !mask } else { mask };
        CutSet { n, mask }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.n).filter(move |i| self.mask >> i & 1 == 1)
    }

    /// Size of the smaller side, which labels the cut's orbit under coordinate permutations.
    pub fn orbit_size_class(&self) -> usize {
        let k = self.mask.count_ones() as usize;
        k.min(self.n + 1 - k)
    }
}

/// All nonzero cuts of `{0, ..., n}` in increasing mask order.
pub fn all_cuts(n: usize) -> Vec<CutSet> {
    (1u64..1 << n).map(|m| CutSet::from_mask(n, m << 1)).collect()
}

/// Coefficients of the linear form `H(b)`: entry `(i, j)` is `b_i b_j`.
pub fn h_form(b: &BVector) -> Vec<i64> {
    let c = b.coords();
    pairs(b.n()).map(|(i, j)| c[i] * c[j]).collect()
}

/// `H(b) d`, exactly.
pub fn h_eval(b: &BVector, d: &DistVec) -> Result<Rat> {
    if b.n() != d.n() {
        return Err(Error::Dimension { expected: d.n() + 1, found: b.n() + 1 });
    }
    let c = b.coords();
    Ok(pairs(d.n())
        .zip(d.values())
        .filter(|((i, j), _)| c[*i] * c[*j] != 0)
        .fold(Rat::zero(), |acc, ((i, j), v)| acc + rat(c[i] * c[j]) * v))
}

/// `H(b) d` on an integer distance vector.
pub fn h_eval_int(b: &BVector, d: &[i64]) -> i64 {
    let c = b.coords();
    let n = b.n();
    let mut s = 0;
    let mut k = 0;
    for i in 0..=n {
        for j in i + 1..=n {
            s += c[i] * c[j] * d[k];
            k += 1;
        }
    }
    s
}

/// The cut semimetric `delta_S` as an integer vector.
pub fn cut_ints(s: &CutSet) -> Vec<i64> {
    let m = s.mask();
    pairs(s.n()).map(|(i, j)| ((m >> i ^ m >> j) & 1) as i64).collect()
}

pub fn cut_vector(s: &CutSet) -> DistVec {
    DistVec::from_ints(s.n(), &cut_ints(s)).expect("cut has the right length")
}

/// Negates `b` on a root `A` (a subset with `b(A) = 0`), given as a bitmask.
pub fn switch_root(b: &BVector, a: u64) -> Result<BVector> {
    let s = b.subset_sum(a);
    if s != 0 {
        return Err(Error::Precondition(alloc::format!("b(A) = {s}, switching needs b(A) = 0")));
    }
    let c = b.coords().iter().enumerate().map(|(i, &x)| if a >> i & 1 == 1 { -x } else { x }).collect();
    Ok(BVector(c))
}

/// The partner `b'` obtained by exchanging the basis vertex `i` (where `b_i = 1`)
/// with the extra vertex of a repartitioning polytope: every coordinate except
/// position `i` is negated.
pub fn geometric_partner(b: &BVector, i: usize) -> Result<BVector> {
    if b.coords().get(i) != Some(&1) {
        return Err(Error::Precondition(alloc::format!("coordinate {i} of b must equal 1")));
    }
    let c = b.coords().iter().enumerate().map(|(k, &x)| if k == i { x } else { -x }).collect();
    Ok(BVector(c))
}

pub fn zero_extension(b: &BVector) -> BVector {
    let mut c = b.0.clone();
    c.push(0);
    BVector(c)
}
