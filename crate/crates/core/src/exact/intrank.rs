use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Rank of a growing set of integer vectors, kept as a fully reduced
/// fraction-free echelon basis.
///
/// Rows live in `i128` with checked arithmetic; the first overflow converts the
/// whole basis to `BigInt` and continues there.
#[derive(Clone, Debug)]
pub struct IncrementalRank {
    dim: usize,
    basis: Basis,
}

#[derive(Clone, Debug)]
enum Basis {
    Small(Vec<(usize, Vec<i128>)>),
    Big(Vec<(usize, Vec<BigInt>)>),
}

impl IncrementalRank {
    pub fn new(dim: usize) -> Self {
        IncrementalRank { dim, basis: Basis::Small(Vec::new()) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        match &self.basis {
            Basis::Small(b) => b.len(),
            Basis::Big(b) => b.len(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim
    }

    /// Adds `v`; returns `true` when it is independent of the vectors seen so far.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        if self.is_full() {
            return false;
        }
        if let Basis::Small(rows) = &mut self.basis {
            let w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
            match insert_small(rows, w) {
                Some(added) => return added,
                None => {
                    let big = rows
                        .iter()
                        .map(|(p, r)| (*p, r.iter().map(|&x| BigInt::from(x)).collect()))
                        .collect();
                    self.basis = Basis::Big(big);
                }
            }
        }
        let Basis::Big(rows) = &mut self.basis else { unreachable!() };
        insert_big(rows, v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

fn gcd_normalize_small(w: &mut [i128]) {
    let g = w.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        w.iter_mut().for_each(|x| *x /= g);
    }
}

/// `None` signals overflow; the basis is left untouched in that case.
fn insert_small(rows: &mut Vec<(usize, Vec<i128>)>, mut w: Vec<i128>) -> Option<bool> {
    for (p, r) in rows.iter() {
        let f = w[*p];
        if f == 0 {
            continue;
        }
        let a = r[*p];
        for j in 0..w.len() {
            w[j] = a.checked_mul(w[j])?.checked_sub(f.checked_mul(r[j])?)?;
        }
        gcd_normalize_small(&mut w);
    }
    let Some(p) = w.iter().position(|&x| x != 0) else {
        return Some(false);
    };
    if w[p] < 0 {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    let mut updated = Vec::with_capacity(rows.len());
    for (q, r) in rows.iter() {
        let f = r[p];
        if f == 0 {
            updated.push(None);
            continue;
        }
        let mut nr = r.clone();
        for j in 0..nr.len() {
            nr[j] = w[p].checked_mul(r[j])?.checked_sub(f.checked_mul(w[j])?)?;
        }
        gcd_normalize_small(&mut nr);
        if nr[*q] < 0 {
            nr.iter_mut().for_each(|x| *x = -*x);
        }
        updated.push(Some(nr));
    }
    for ((_, r), u) in rows.iter_mut().zip(updated) {
        if let Some(u) = u {
            *r = u;
        }
    }
    rows.push((p, w));
    Some(true)
}

fn gcd_normalize_big(w: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in w.iter() {
        g = g.gcd(x);
    }
    if g > BigInt::from(1) {
        w.iter_mut().for_each(|x| *x = &*x / &g);
    }
}

fn insert_big(rows: &mut Vec<(usize, Vec<BigInt>)>, mut w: Vec<BigInt>) -> bool {
    for (p, r) in rows.iter() {
        if w[*p].is_zero() {
            continue;
        }
        let f = w[*p].clone();
        let a = &r[*p];
        for j in 0..w.len() {
            w[j] = a * &w[j] - &f * &r[j];
        }
        gcd_normalize_big(&mut w);
    }
    let Some(p) = w.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if w[p].is_negative() {
        w.iter_mut().for_each(|x| *x = -&*x);
    }
    for (q, r) in rows.iter_mut() {
        if r[p].is_zero() {
            continue;
        }
        let f = r[p].clone();
        for j in 0..r.len() {
            r[j] = &w[p] * &r[j] - &f * &w[j];
        }
        gcd_normalize_big(r);
        if r[*q].is_negative() {
            r.iter_mut().for_each(|x| *x = -&*x);
        }
    }
    rows.push((p, w));
    true
}

/// Exact rank of a list of integer vectors of length `dim`.
pub fn int_rank<'a, I>(dim: usize, vectors: I) -> usize
where
    I: IntoIterator<Item = &'a [i64]>,
{
    let mut r = IncrementalRank::new(dim);
    for v in vectors {
        r.insert(v);
        if r.is_full() {
            break;
        }
    }
    r.rank()
}
