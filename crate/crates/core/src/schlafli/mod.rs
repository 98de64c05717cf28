//! The Schläfli polytope: 27 vertices labeled by the lines of a cubic surface,
//! its symmetry group, its affine bases and the extreme rays of `HYP_7` they give.
//!
//! Vertices are `a_1..a_6` (ids 0..6), `b_1..b_6` (ids 6..12) and `c_ij`
//! (ids 12..27, pairs in lexicographic order). Two vertices are adjacent in the
//! skeleton iff the corresponding lines are skew; adjacent vertices are at
//! squared distance 2 and the others at squared distance 4. The construction
//! is checked at build time by realizing it in a lattice and verifying that
//! the circumsphere of a basis is empty with exactly these 27 points on it.

mod inventory;

pub use inventory::{ray_inventory, Ray, RayInventory, RayKind};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use once_cell::race::OnceBox;

use crate::delaunay::{realize, vertex_to_bvector};
use crate::equiv::{canonical_form, ColoredGraph, Perm, PermGroup};
use crate::exact::{IncrementalRank, RatMatrix};
use crate::hypercone::{BVector, DistVec};
use crate::{Error, Result};

pub const VERTICES: usize = 27;
pub const AUT_ORDER: u32 = 51840;
const DIM: usize = 6;

fn line_pairs() -> Vec<(usize, usize)> {
    (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Line {
    A(usize),
    B(usize),
    C(usize, usize),
}

fn line(v: usize) -> Line {
    match v {
        0..=5 => Line::A(v),
        6..=11 => Line::B(v - 6),
        _ => {
            let (i, j) = line_pairs()[v - 12];
            Line::C(i, j)
        }
    }
}

/// Human-readable vertex label, e.g. `a1`, `b4`, `c26`.
pub fn vertex_name(v: usize) -> String {
    match line(v) {
        Line::A(i) => format!("a{}", i + 1),
        Line::B(i) => format!("b{}", i + 1),
        Line::C(i, j) => format!("c{}{}", i + 1, j + 1),
    }
}

fn lines_meet(x: Line, y: Line) -> bool {
    use Line::*;
    match (x, y) {
        (A(i), B(j)) | (B(j), A(i)) => i != j,
        (A(i), C(j, k)) | (C(j, k), A(i)) | (B(i), C(j, k)) | (C(j, k), B(i)) => i == j || i == k,
        (C(i, j), C(k, l)) => i != k && i != l && j != k && j != l,
        _ => false,
    }
}

/// Checks strong regularity with parameters `(v, k, lambda, mu)`.
pub fn is_strongly_regular(g: &ColoredGraph, k: usize, lambda: usize, mu: usize) -> bool {
    let n = g.len();
    (0..n).all(|v| g.degree(v) == k)
        && (0..n).all(|a| {
            (a + 1..n).all(|b| {
                let common = (0..n).filter(|&c| g.has_edge(a, c) && g.has_edge(b, c)).count();
                common == if g.has_edge(a, b) { lambda } else { mu }
            })
        })
}

/// The 27-vertex model with a lattice realization.
#[derive(Clone, Debug)]
pub struct SchlafliModel {
    graph: ColoredGraph,
    aut_generators: Vec<Perm>,
    base: [usize; 7],
    coords: Vec<Vec<i64>>,
}

impl SchlafliModel {
    /// Builds the model and runs every self-check; a failure is a bug in the construction.
    pub fn build() -> Result<Self> {
        let edges = (0..VERTICES)
            .flat_map(|a| (a + 1..VERTICES).map(move |b| (a, b)))
            .filter(|&(a, b)| !lines_meet(line(a), line(b)));
        let graph = ColoredGraph::from_edges(VERTICES, edges);
        if !is_strongly_regular(&graph, 16, 10, 8) {
            return Err(Error::SelfCheck("skeleton is not SRG(27,16,10,8)".into()));
        }
        if !is_strongly_regular(&graph.complement(), 10, 1, 5) {
            return Err(Error::SelfCheck("complement is not SRG(27,10,1,5)".into()));
        }
        let aut_generators = canonical_form(&graph).generators;
        let order = PermGroup::new(VERTICES, &aut_generators).order();
        if order != BigUint::from(AUT_ORDER) {
            return Err(Error::SelfCheck(format!("automorphism group has order {order}")));
        }
        let mut model = SchlafliModel { graph, aut_generators, base: [0; 7], coords: Vec::new() };
        let (base, coords) = model.find_base().ok_or_else(|| Error::SelfCheck("no affine basis found".into()))?;
        model.base = base;
        model.coords = coords;
        model.check_realization()?;
        Ok(model)
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn aut_generators(&self) -> &[Perm] {
        &self.aut_generators
    }

    pub fn aut_group(&self) -> PermGroup {
        PermGroup::new(VERTICES, &self.aut_generators)
    }

    pub fn base(&self) -> [usize; 7] {
        self.base
    }

    /// Integer coordinates of vertex `v` in the basis `base[i] - base[0]`.
    pub fn coords(&self, v: usize) -> &[i64] {
        &self.coords[v]
    }

    /// Squared distance between two vertices.
    pub fn dist(&self, a: usize, b: usize) -> i64 {
        if a == b {
            0
        } else if self.graph.has_edge(a, b) {
            2
        } else {
            4
        }
    }

    /// Distance vector of an ordered 7-tuple of vertices.
    pub fn dist_vec(&self, tuple: &[usize]) -> DistVec {
        let n = tuple.len() - 1;
        let d: Vec<i64> = crate::hypercone::pairs(n).map(|(i, j)| self.dist(tuple[i], tuple[j])).collect();
        DistVec::from_ints(n, &d).expect("pair count matches")
    }

    fn gram_of(&self, tuple: &[usize]) -> RatMatrix {
        let v0 = tuple[0];
        let rows: Vec<Vec<i64>> = tuple[1..]
            .iter()
            .map(|&u| tuple[1..].iter().map(|&w| (self.dist(v0, u) + self.dist(v0, w) - self.dist(u, w)) / 2).collect())
            .collect();
        RatMatrix::from_int_rows(&rows).expect("rectangular")
    }

    /// First (in lexicographic order) 7-tuple starting at vertex 0 for which
    /// every vertex has integer coordinates.
    fn find_base(&self) -> Option<([usize; 7], Vec<Vec<i64>>)> {
        fn extend(m: &SchlafliModel, chosen: &mut Vec<usize>) -> Option<([usize; 7], Vec<Vec<i64>>)> {
            if chosen.len() == 7 {
                let coords = m.solve_coords(chosen)?;
                let mut base = [0; 7];
                base.copy_from_slice(chosen);
                return Some((base, coords));
            }
            let start = chosen.last().map_or(0, |&v| v + 1);
            for v in start..VERTICES {
                chosen.push(v);
                if chosen.len() == 1 || !m.gram_of(chosen).det().expect("square").is_zero() {
                    if let Some(found) = extend(m, chosen) {
                        return Some(found);
                    }
                }
                chosen.pop();
            }
            None
        }
        extend(self, &mut Vec::new())
    }

    /// Coordinates of every vertex in the basis given by `tuple`, if all integral.
    fn solve_coords(&self, tuple: &[usize]) -> Option<Vec<Vec<i64>>> {
        let inv = self.gram_of(tuple).inverse().ok()??;
        let v0 = tuple[0];
        (0..VERTICES)
            .map(|x| {
                let w: Vec<crate::exact::Rat> = tuple[1..]
                    .iter()
                    .map(|&u| crate::exact::rat((self.dist(x, v0) + self.dist(u, v0) - self.dist(x, u)) / 2))
                    .collect();
                inv.mul_vec(&w)
                    .ok()?
                    .iter()
                    .map(|r| if r.is_integer() { r.to_integer().to_i64() } else { None })
                    .collect()
            })
            .collect()
    }

    fn check_realization(&self) -> Result<()> {
        let g = self.gram_of(&self.base);
        for a in 0..VERTICES {
            for b in a..VERTICES {
                let diff: Vec<crate::exact::Rat> =
                    (0..DIM).map(|k| crate::exact::rat(self.coords[a][k] - self.coords[b][k])).collect();
                let q = crate::exact::dot(&diff, &g.mul_vec(&diff)?);
                if q != crate::exact::rat(self.dist(a, b)) {
                    return Err(Error::SelfCheck(format!(
                        "distance {}-{} is not realized",
                        vertex_name(a),
                        vertex_name(b)
                    )));
                }
            }
        }
        let real = realize(&self.dist_vec(&self.base))?;
        let expected: BTreeSet<BVector> = (0..VERTICES).map(|v| vertex_to_bvector(&self.coords[v])).collect();
        let found: BTreeSet<BVector> = real.ann.into_iter().collect();
        if expected.len() != VERTICES || found != expected {
            return Err(Error::SelfCheck(format!("sphere carries {} lattice points, expected the 27 vertices", found.len())));
        }
        Ok(())
    }

    fn affinely_independent(&self, verts: &[usize]) -> bool {
        let Some((&v0, rest)) = verts.split_first() else { return true };
        let mut r = IncrementalRank::new(DIM);
        rest.iter().all(|&v| {
            let diff: Vec<i64> = (0..DIM).map(|k| self.coords[v][k] - self.coords[v0][k]).collect();
            r.insert(&diff)
        })
    }

    fn relative_volume(&self, verts: &[usize]) -> crate::exact::Rat {
        let v0 = verts[0];
        let rows: Vec<Vec<i64>> =
            verts[1..].iter().map(|&v| (0..DIM).map(|k| self.coords[v][k] - self.coords[v0][k]).collect()).collect();
        RatMatrix::from_int_rows(&rows).and_then(|m| m.det()).expect("6 x 6")
    }

    /// Whether the 7 vertices form an affine basis: every vertex is an integer
    /// affine combination of them.
    pub fn is_affine_basis(&self, verts: &[usize]) -> bool {
        verts.len() == 7 && crate::exact::is_one_or_minus_one(&self.relative_volume(verts))
    }

    /// Barycentric coordinates of every vertex with respect to an ordered affine basis.
    pub fn barycentric(&self, basis: &[usize]) -> Result<Vec<BVector>> {
        if !self.is_affine_basis(basis) {
            return Err(Error::Precondition("not an affine basis".into()));
        }
        let v0 = basis[0];
        let cols: Vec<Vec<i64>> =
            basis[1..].iter().map(|&v| (0..DIM).map(|k| self.coords[v][k] - self.coords[v0][k]).collect()).collect();
        // rows of m are the basis differences; x - v0 = m^T y
        let mt = RatMatrix::from_int_rows(&cols)?.transpose();
        let inv = mt.inverse()?.ok_or(Error::Degenerate)?;
        (0..VERTICES)
            .map(|x| {
                let diff = crate::exact::to_rats(
                    &(0..DIM).map(|k| self.coords[x][k] - self.coords[v0][k]).collect::<Vec<_>>(),
                );
                let y: Vec<i64> = inv
                    .mul_vec(&diff)?
                    .iter()
                    .map(|r| r.to_integer().to_i64().filter(|_| r.is_integer()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::SelfCheck("non-integral barycentric coordinate".into()))?;
                Ok(vertex_to_bvector(&y))
            })
            .collect()
    }

    fn subset_graph(&self, verts: &[usize]) -> ColoredGraph {
        let mut g = self.graph.clone();
        for &v in verts {
            g.set_color(v, 1);
        }
        g
    }

    /// Canonical key of a vertex subset up to automorphisms of the skeleton.
    pub fn subset_key(&self, verts: &[usize]) -> Vec<u8> {
        canonical_form(&self.subset_graph(verts)).bytes
    }

    /// Canonical key of a vertex subset given as a 27-bit mask.
    pub fn mask_key(&self, mask: u32) -> Vec<u8> {
        let verts: Vec<usize> = (0..VERTICES).filter(|v| mask >> v & 1 == 1).collect();
        self.subset_key(&verts)
    }

    /// Orbit representatives, under the automorphism group, of affinely
    /// independent `k`-subsets for `k = 1..=7`, each level listed as sorted subsets.
    pub fn independent_subset_orbits(&self) -> Vec<Vec<Vec<usize>>> {
        let mut levels: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut current: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        for v in 0..VERTICES {
            current.entry(self.subset_key(&[v])).or_insert_with(|| vec![v]);
        }
        levels.push(current.values().cloned().collect());
        for _ in 2..=7 {
            let mut next: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
            for rep in levels.last().expect("nonempty") {
                for v in 0..VERTICES {
                    if rep.contains(&v) {
                        continue;
                    }
                    let mut s = rep.clone();
                    s.push(v);
                    s.sort_unstable();
                    if !self.affinely_independent(&s) {
                        continue;
                    }
                    next.entry(self.subset_key(&s)).or_insert(s);
                }
            }
            levels.push(next.into_values().collect());
        }
        levels
    }

    /// Affine bases up to automorphisms, grouped by the distance vector they
    /// induce up to a relabeling of its 7 points.
    pub fn affine_bases(&self) -> Vec<BasisOrbit> {
        let levels = self.independent_subset_orbits();
        let mut classes: BTreeMap<Vec<u8>, BasisOrbit> = BTreeMap::new();
        for s in levels[6].iter().filter(|s| self.is_affine_basis(s)) {
            let stab = PermGroup::new(VERTICES, &canonical_form(&self.subset_graph(s)).generators).order();
            let orbit_size = (BigUint::from(AUT_ORDER) / stab).to_u64().expect("small");
            let induced = self.induced_graph(s);
            let form = canonical_form(&induced);
            let entry = classes.entry(form.bytes).or_insert_with(|| {
                let ordered: Vec<usize> = form.labeling.iter().map(|&k| s[k]).collect();
                let mut representative = [0; 7];
                representative.copy_from_slice(&ordered);
                let sym7_orbit = (BigUint::from(5040u32)
                    / PermGroup::new(7, &form.generators).order())
                .to_u64()
                .expect("small");
                BasisOrbit {
                    representative,
                    dist: self.dist_vec(&ordered),
                    aut_orbits: 0,
                    aut_orbit_size: 0,
                    sym7_orbit_size: sym7_orbit,
                }
            });
            entry.aut_orbits += 1;
            entry.aut_orbit_size += orbit_size;
        }
        let mut out: Vec<BasisOrbit> = classes.into_values().collect();
        out.sort_by(|a, b| a.dist.values().cmp(b.dist.values()));
        out
    }

    fn induced_graph(&self, verts: &[usize]) -> ColoredGraph {
        let mut g = ColoredGraph::new(verts.len());
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if self.graph.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

/// One class of affine bases: all bases whose distance vectors agree up to
/// a relabeling of the 7 points.
#[derive(Clone, Debug)]
pub struct BasisOrbit {
    /// Basis vertices in canonical order; `dist` is their distance vector.
    pub representative: [usize; 7],
    pub dist: DistVec,
    /// Number of automorphism orbits of bases in this class.
    pub aut_orbits: usize,
    /// Number of bases (as unordered sets) in this class.
    pub aut_orbit_size: u64,
    /// Number of distinct distance vectors obtained by relabeling `dist`.
    pub sym7_orbit_size: u64,
}

static MODEL: OnceBox<SchlafliModel> = OnceBox::new();
static BASES: OnceBox<Vec<BasisOrbit>> = OnceBox::new();

/// Shared model, built and self-checked on first use.
pub fn schlafli_model() -> Result<&'static SchlafliModel> {
    MODEL.get_or_try_init(|| SchlafliModel::build().map(alloc::boxed::Box::new))
}

/// Shared list of basis classes.
pub fn affine_bases() -> Result<&'static [BasisOrbit]> {
    let model = schlafli_model()?;
    BASES.get_or_try_init(|| Ok(alloc::boxed::Box::new(model.affine_bases()))).map(Vec::as_slice)
}
