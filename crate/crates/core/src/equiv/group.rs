//! Permutation groups via a deterministic Schreier-Sims stabilizer chain.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

/// A permutation as an image table: `p[x]` is the image of `x`.
pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

/// `(a * b)(x) = a(b(x))`.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&x| a[x]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// `transversal[p]` maps the base point to `p`.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(identity(degree));
        Level { base, gens: Vec::new(), transversal, orbit: vec![base] }
    }

    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            for g in &self.gens {
                let q = g[p];
                if self.transversal[q].is_none() {
                    let u = compose(g, self.transversal[p].as_ref().expect("orbit point"));
                    self.transversal[q] = Some(u);
                    self.orbit.push(q);
                }
            }
            i += 1;
        }
    }
}

/// Group generated by a set of permutations, stored as a stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn new(degree: usize, gens: &[Perm]) -> Self {
        let gens: Vec<Perm> = gens.iter().filter(|g| !is_identity(g)).cloned().collect();
        let mut base: Vec<usize> = Vec::new();
        for g in &gens {
            debug_assert_eq!(g.len(), degree);
            if base.iter().all(|&b| g[b] == b) {
                base.push((0..degree).find(|&x| g[x] != x).expect("non-identity"));
            }
        }
        let mut levels: Vec<Level> = Vec::new();
        for (l, &b) in base.iter().enumerate() {
            let mut lvl = Level::new(degree, b);
            lvl.gens = gens.iter().filter(|g| base[..l].iter().all(|&c| g[c] == c)).cloned().collect();
            lvl.extend_orbit();
            levels.push(lvl);
        }
        let mut group = PermGroup { degree, levels };
        group.complete();
        group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level where it stopped.
    fn strip_from(&self, g: &[usize], from: usize) -> (Perm, usize) {
        let mut h = g.to_vec();
        for i in from..self.levels.len() {
            let lvl = &self.levels[i];
            match &lvl.transversal[h[lvl.base]] {
                None => return (h, i),
                Some(u) => h = compose(&inverse(u), &h),
            }
        }
        (h, self.levels.len())
    }

    /// Schreier-Sims: repeat until every Schreier generator of every level sifts
    /// to the identity through the levels below it.
    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            let mut added = None;
            'scan: for oi in 0..self.levels[lvl].orbit.len() {
                let p = self.levels[lvl].orbit[oi];
                for s in &self.levels[lvl].gens {
                    let level = &self.levels[lvl];
                    let up = level.transversal[p].as_ref().expect("orbit point");
                    let usp = level.transversal[s[p]].as_ref().expect("orbit is closed");
                    let y = compose(&inverse(usp), &compose(s, up));
                    let (h, j) = self.strip_from(&y, lvl + 1);
                    if j < self.levels.len() || !is_identity(&h) {
                        added = Some((h, j));
                        break 'scan;
                    }
                }
            }
            match added {
                None => i -= 1,
                Some((h, j)) => {
                    if j == self.levels.len() {
                        let moved = (0..self.degree).find(|&x| h[x] != x).expect("non-identity residue");
                        self.levels.push(Level::new(self.degree, moved));
                    }
                    for l in lvl + 1..=j {
                        self.levels[l].gens.push(h.clone());
                        self.levels[l].extend_orbit();
                    }
                    i = j + 1;
                }
            }
        }
    }

    fn strip(&self, g: &[usize]) -> (Perm, usize) {
        self.strip_from(g, 0)
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        let (h, _) = self.strip(g);
        is_identity(&h)
    }

    /// All generators across the chain (a strong generating set).
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Enumerates every element. Only sensible for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![identity(self.degree)];
        for lvl in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lvl.orbit.len());
            for &p in &lvl.orbit {
                let u = lvl.transversal[p].as_ref().expect("orbit point");
                for g in &out {
                    next.push(compose(u, g));
                }
            }
            out = next;
        }
        out
    }
}

/// Orbits of the group generated by `gens` on `0..n`, as a representative per point
/// (the smallest point of its orbit).
pub fn orbit_reps(n: usize, gens: &[Perm]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in gens {
        for x in 0..n {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g[x]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}
