//! Canonical labeling of vertex-colored graphs by individualization and
//! refinement, with automorphism pruning.
//!
//! Cells of the ordered partition are contiguous ranges of `elems`. Refinement
//! splits cells by the number of neighbours in a splitter cell and orders the
//! fragments by that count, so the partition reached from a given graph does
//! not depend on vertex names. The canonical form is the smallest leaf code.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::group::{inverse, is_identity, orbit_reps, Perm};
use crate::bits::Bits;

/// Undirected loopless graph with small integer vertex colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    adj: Vec<Vec<usize>>,
    matrix: Vec<Bits>,
    colors: Vec<u32>,
}

impl ColoredGraph {
    pub fn new(n: usize) -> Self {
        ColoredGraph { adj: vec![Vec::new(); n], matrix: vec![Bits::new(n); n], colors: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a == b || self.matrix[a].contains(b) {
            return;
        }
        self.matrix[a].insert(b);
        self.matrix[b].insert(a);
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.matrix[a].contains(b)
    }

    pub fn set_color(&mut self, v: usize, c: u32) {
        self.colors[v] = c;
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> ColoredGraph {
        let n = self.len();
        let mut g = ColoredGraph::new(n);
        for v in 0..n {
            g.colors[perm[v]] = self.colors[v];
            for &u in &self.adj[v] {
                if u > v {
                    g.add_edge(perm[v], perm[u]);
                }
            }
        }
        g
    }

    pub fn complement(&self) -> ColoredGraph {
        let n = self.len();
        let mut g = ColoredGraph::new(n);
        g.colors = self.colors.clone();
        for a in 0..n {
            for b in a + 1..n {
                if !self.has_edge(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn is_automorphism(&self, p: &[usize]) -> bool {
        (0..self.len()).all(|v| {
            self.colors[v] == self.colors[p[v]] && self.adj[v].iter().all(|&u| self.has_edge(p[v], p[u]))
        })
    }
}

/// Result of canonical labeling.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// `labeling[k]` is the vertex placed at canonical position `k`.
    pub labeling: Vec<usize>,
    /// Encoding of the canonically relabeled graph; equal iff the graphs are isomorphic.
    pub bytes: Vec<u8>,
    /// Generators of the automorphism group.
    pub generators: Vec<Perm>,
}

#[derive(Clone)]
struct Partition {
    elems: Vec<usize>,
    /// start of the cell containing each vertex
    cell_of: Vec<usize>,
    /// end (exclusive) of the cell starting at each position; meaningful at starts only
    end: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn by_colors(g: &ColoredGraph) -> Self {
        let n = g.len();
        let mut elems: Vec<usize> = (0..n).collect();
        elems.sort_by_key(|&v| (g.colors[v], v));
        let mut p = Partition { elems, cell_of: vec![0; n], end: vec![0; n], cells: 0 };
        let mut s = 0;
        while s < n {
            let c = g.colors[p.elems[s]];
            let mut e = s;
            while e < n && g.colors[p.elems[e]] == c {
                p.cell_of[p.elems[e]] = s;
                e += 1;
            }
            p.end[s] = e;
            p.cells += 1;
            s = e;
        }
        p
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.elems.len()
    }

    fn starts(&self) -> impl Iterator<Item = usize> + '_ {
        let mut s = 0;
        core::iter::from_fn(move || {
            if s >= self.elems.len() {
                return None;
            }
            let cur = s;
            s = self.end[s];
            Some(cur)
        })
    }

    /// Places `v` first in its cell as a new singleton; returns the singleton's start.
    fn individualize(&mut self, v: usize) -> usize {
        let s = self.cell_of[v];
        let e = self.end[s];
        let pos = (s..e).find(|&i| self.elems[i] == v).expect("v is in its cell");
        self.elems.swap(s, pos);
        self.end[s] = s + 1;
        self.end[s + 1] = e;
        for i in s + 1..e {
            self.cell_of[self.elems[i]] = s + 1;
        }
        self.cells += 1;
        s
    }
}

fn refine(g: &ColoredGraph, p: &mut Partition, initial: &[usize]) {
    let n = g.len();
    let mut queue: VecDeque<usize> = initial.iter().copied().collect();
    let mut queued = vec![false; n];
    for &s in initial {
        queued[s] = true;
    }
    let mut count = vec![0usize; n];
    while let Some(w) = queue.pop_front() {
        queued[w] = false;
        if p.is_discrete() {
            break;
        }
        let splitter: Vec<usize> = p.elems[w..p.end[w]].to_vec();
        for &u in &splitter {
            for &v in &g.adj[u] {
                count[v] += 1;
            }
        }
        let starts: Vec<usize> = p.starts().collect();
        for s in starts {
            let e = p.end[s];
            if e - s == 1 {
                continue;
            }
            let first = count[p.elems[s]];
            if p.elems[s..e].iter().all(|&v| count[v] == first) {
                continue;
            }
            p.elems[s..e].sort_by_key(|&v| count[v]);
            let mut fs = s;
            while fs < e {
                let c = count[p.elems[fs]];
                let mut fe = fs;
                while fe < e && count[p.elems[fe]] == c {
                    p.cell_of[p.elems[fe]] = fs;
                    fe += 1;
                }
                p.end[fs] = fe;
                if fs != s {
                    p.cells += 1;
                }
                if !queued[fs] {
                    queued[fs] = true;
                    queue.push_back(fs);
                }
                fs = fe;
            }
        }
        for &u in &splitter {
            for &v in &g.adj[u] {
                count[v] = 0;
            }
        }
    }
}

struct Search<'g> {
    g: &'g ColoredGraph,
    first: Option<(Vec<u64>, Vec<usize>)>,
    best: Option<(Vec<u64>, Vec<usize>)>,
    generators: Vec<Perm>,
}

impl Search<'_> {
    fn leaf_code(&self, elems: &[usize]) -> Vec<u64> {
        let n = elems.len();
        let mut code = Vec::with_capacity(n + n * n / 128 + 1);
        code.extend(elems.iter().map(|&v| self.g.colors[v] as u64));
        let mut word = 0u64;
        let mut bit = 0;
        for a in 0..n {
            let row = &self.g.matrix[elems[a]];
            for &vb in &elems[a + 1..] {
                if row.contains(vb) {
                    word |= 1 << bit;
                }
                bit += 1;
                if bit == 64 {
                    code.push(word);
                    word = 0;
                    bit = 0;
                }
            }
        }
        code.push(word);
        code
    }

    fn record_automorphism(&mut self, from: &[usize], to: &[usize]) {
        // maps from[k] -> to[k]
        let mut gamma = vec![0; from.len()];
        for (a, b) in from.iter().zip(to) {
            gamma[*a] = *b;
        }
        if !is_identity(&gamma) && !self.generators.contains(&gamma) {
            debug_assert!(self.g.is_automorphism(&gamma));
            self.generators.push(gamma);
        }
    }

    fn leaf(&mut self, elems: &[usize]) {
        let code = self.leaf_code(elems);
        let Some((first_code, first_lab)) = &self.first else {
            self.first = Some((code.clone(), elems.to_vec()));
            self.best = Some((code, elems.to_vec()));
            return;
        };
        if code == *first_code {
            let fl = first_lab.clone();
            self.record_automorphism(elems, &fl);
            return;
        }
        let (best_code, best_lab) = self.best.as_ref().expect("set with first");
        match code.cmp(best_code) {
            core::cmp::Ordering::Less => self.best = Some((code, elems.to_vec())),
            core::cmp::Ordering::Equal => {
                let bl = best_lab.clone();
                self.record_automorphism(elems, &bl);
            }
            core::cmp::Ordering::Greater => {}
        }
    }

    fn visit(&mut self, p: &Partition, prefix: &mut Vec<usize>) {
        if p.is_discrete() {
            self.leaf(&p.elems);
            return;
        }
        let target = p.starts().find(|&s| p.end[s] - s > 1).expect("non-discrete partition");
        let mut cands: Vec<usize> = p.elems[target..p.end[target]].to_vec();
        cands.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        let mut seen_gens = usize::MAX;
        let mut reps: Vec<usize> = Vec::new();
        for v in cands {
            if !explored.is_empty() {
                if seen_gens != self.generators.len() {
                    let fixing: Vec<Perm> = self
                        .generators
                        .iter()
                        .filter(|g| prefix.iter().all(|&x| g[x] == x))
                        .cloned()
                        .collect();
                    reps = orbit_reps(self.g.len(), &fixing);
                    seen_gens = self.generators.len();
                }
                if explored.iter().any(|&u| reps[u] == reps[v]) {
                    continue;
                }
            }
            let mut child = p.clone();
            let s = child.individualize(v);
            refine(self.g, &mut child, &[s]);
            prefix.push(v);
            self.visit(&child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }
}

/// Canonical form and automorphism generators of a colored graph.
pub fn canonical_form(g: &ColoredGraph) -> CanonicalForm {
    let n = g.len();
    let mut p = Partition::by_colors(g);
    let starts: Vec<usize> = p.starts().collect();
    refine(g, &mut p, &starts);
    let mut search = Search { g, first: None, best: None, generators: Vec::new() };
    if n > 0 {
        search.visit(&p, &mut Vec::new());
    }
    let (code, labeling) = search.best.take().unwrap_or_default();
    let mut bytes = Vec::with_capacity(4 + code.len() * 8);
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    for (i, w) in code.iter().enumerate() {
        if i < n {
            bytes.extend_from_slice(&(*w as u32).to_le_bytes());
        } else {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
    }
    CanonicalForm { labeling, bytes, generators: search.generators }
}

/// Permutation `p` with `p[v]` = canonical position of `v`.
pub fn canonical_positions(form: &CanonicalForm) -> Perm {
    inverse(&form.labeling)
}

/// `true` if the two graphs are isomorphic.
pub fn isomorphic(a: &ColoredGraph, b: &ColoredGraph) -> bool {
    a.len() == b.len() && canonical_form(a).bytes == canonical_form(b).bytes
}
