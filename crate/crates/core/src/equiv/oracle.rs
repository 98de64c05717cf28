//! Direct test of geometric equivalence: search for a unimodular affine
//! basis of one annulator that carries the other annulator onto it.

use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::exact::{is_one_or_minus_one, RatMatrix};
use crate::hypercone::BVector;
use crate::{Error, Result};

/// Whether some ordered affine basis `c_0, ..., c_n` of `Ann(f)` with
/// determinant `±1` makes `b -> sum b_i c_i` a bijection from `Ann(g)` onto `Ann(f)`.
///
/// Both annulators contain the basic vectors, so the map sends `e_i` to `c_i`.
pub fn oracle_equivalent(ann_f: &[BVector], ann_g: &[BVector]) -> Result<bool> {
    if ann_f.is_empty() || ann_g.is_empty() {
        return Err(Error::MissingAnnulator);
    }
    let dim = ann_f[0].coords().len();
    if ann_g[0].coords().len() != dim {
        return Err(Error::Dimension { expected: dim, found: ann_g[0].coords().len() });
    }
    if ann_f.len() != ann_g.len() {
        return Ok(false);
    }
    let target: HashSet<&[i64]> = ann_f.iter().map(BVector::coords).collect();
    let source: HashSet<&[i64]> = ann_g.iter().map(BVector::coords).collect();
    let labels_f = affine_labels(ann_f, &target);
    let labels_g = affine_labels(ann_g, &source);
    let (mut sorted_f, mut sorted_g) = (labels_f.clone(), labels_g.clone());
    sorted_f.sort_unstable();
    sorted_g.sort_unstable();
    if sorted_f != sorted_g {
        return Ok(false);
    }
    // label each c_k must carry: that of e_k in Ann(g)
    let wanted: Vec<Option<Label>> = (0..dim)
        .map(|k| ann_g.iter().position(|b| b.coords().iter().enumerate().all(|(i, &x)| x == i64::from(i == k))))
        .map(|pos| pos.map(|p| labels_g[p]))
        .collect();
    // elements of Ann(g) grouped by the largest index in their support
    let mut by_last: Vec<Vec<&[i64]>> = alloc::vec![Vec::new(); dim];
    for b in ann_g {
        if let Some(last) = b.coords().iter().rposition(|&x| x != 0) {
            by_last[last].push(b.coords());
        }
    }
    let mut search = Search { ann_f, target, labels_f, wanted, by_last, chosen: Vec::with_capacity(dim), dim };
    Ok(search.extend())
}

/// Point labels preserved by affine bijections between point sets:
/// the number of `q` with `2p - q` in the set, and of pairs `q != r` with `p + q - r` in it.
type Label = (u32, u32);

fn affine_labels(points: &[BVector], set: &HashSet<&[i64]>) -> Vec<Label> {
    let mut buf = Vec::new();
    let mut hits = |f: &dyn Fn(usize) -> i64| {
        buf.clear();
        buf.extend((0..points[0].coords().len()).map(f));
        set.contains(buf.as_slice())
    };
    points
        .iter()
        .map(|p| {
            let p = p.coords();
            let mut mid = 0;
            let mut par = 0;
            for q in points.iter().map(BVector::coords).filter(|&q| q != p) {
                mid += u32::from(hits(&|i| 2 * p[i] - q[i]));
                for r in points.iter().map(BVector::coords).filter(|&r| r != q) {
                    par += u32::from(hits(&|i| p[i] + q[i] - r[i]));
                }
            }
            (mid, par)
        })
        .collect()
}

struct Search<'a> {
    ann_f: &'a [BVector],
    target: HashSet<&'a [i64]>,
    labels_f: Vec<Label>,
    wanted: Vec<Option<Label>>,
    by_last: Vec<Vec<&'a [i64]>>,
    chosen: Vec<usize>,
    dim: usize,
}

impl Search<'_> {
    fn image(&self, b: &[i64]) -> Vec<i64> {
        let mut out = alloc::vec![0; self.dim];
        for (k, &c) in self.chosen.iter().enumerate() {
            if b[k] != 0 {
                for (o, &x) in out.iter_mut().zip(self.ann_f[c].coords()) {
                    *o += b[k] * x;
                }
            }
        }
        out
    }

    fn extend(&mut self) -> bool {
        let k = self.chosen.len();
        if k == self.dim {
            let rows: Vec<Vec<i64>> = self.chosen.iter().map(|&c| self.ann_f[c].coords().to_vec()).collect();
            let det = RatMatrix::from_int_rows(&rows).and_then(|m| m.det()).expect("square");
            return is_one_or_minus_one(&det);
        }
        for c in 0..self.ann_f.len() {
            if self.chosen.contains(&c) || self.wanted[k].is_some_and(|w| w != self.labels_f[c]) {
                continue;
            }
            self.chosen.push(c);
            let ok = self.by_last[k].iter().all(|b| self.target.contains(self.image(b).as_slice()));
            if ok && self.extend() {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}
