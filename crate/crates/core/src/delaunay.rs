//! Lattice Delaunay polytope reconstruction from a distance vector.
//!
//! A distance vector `d` on points `v_0, ..., v_n` gives the Gram matrix of
//! the basis `v_1 - v_0, ..., v_n - v_0`. When it is nonsingular the points
//! generate a lattice (in basis coordinates, `Z^n` with that Gram matrix),
//! and the lattice points on the circumsphere of the basis are the vertices
//! of the Delaunay polytope.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::{rat, ratio, Rat, RatMatrix};
use crate::hypercone::{facet_catalog, BVector, DistVec};
use crate::{Error, Result};

/// `G_ij = (d(0,i) + d(0,j) - d(i,j)) / 2` for `1 <= i, j <= n`.
pub fn gram_from_distance(d: &DistVec) -> RatMatrix {
    let n = d.n();
    let half = ratio(1, 2);
    let mut g = RatMatrix::zeros(n, n);
    for i in 1..=n {
        for j in 1..=n {
            g[(i - 1, j - 1)] = (d.get(0, i) + d.get(0, j) - d.get(i, j)) * &half;
        }
    }
    g
}

/// Determinant of the Gram matrix; zero iff `d` is degenerate.
pub fn gram_det(d: &DistVec) -> Rat {
    gram_from_distance(d).det().expect("Gram matrix is square")
}

fn check_hypermetric(d: &DistVec) -> Result<()> {
    match d.n() {
        2..=6 => {
            if !facet_catalog(d.n())?.is_hypermetric(d)? {
                return Err(Error::NotHypermetric);
            }
        }
        _ => {
            if d.values().iter().any(Signed::is_negative) {
                return Err(Error::NotHypermetric);
            }
        }
    }
    Ok(())
}

/// Whether `d` (required to be hypermetric) comes from an affinely independent family.
pub fn is_nondegenerate(d: &DistVec) -> Result<bool> {
    check_hypermetric(d)?;
    Ok(!gram_det(d).is_zero())
}

/// Circumcenter in basis coordinates and squared circumradius, with `v_0` at the origin.
pub fn circumsphere(d: &DistVec) -> Result<(Vec<Rat>, Rat)> {
    let g = gram_from_distance(d);
    circumsphere_of_gram(&g)
}

pub(crate) fn circumsphere_of_gram(g: &RatMatrix) -> Result<(Vec<Rat>, Rat)> {
    let n = g.rows();
    // |e_i - c|^2 = |c|^2  <=>  (G c)_i = G_ii / 2
    let rhs: Vec<Rat> = (0..n).map(|i| &g[(i, i)] * ratio(1, 2)).collect();
    let inv = g.inverse()?.ok_or(Error::Degenerate)?;
    let c = inv.mul_vec(&rhs)?;
    let r2 = quad_form(g, &c);
    Ok((c, r2))
}

fn quad_form(g: &RatMatrix, y: &[Rat]) -> Rat {
    let gy = g.mul_vec(y).expect("matching dimensions");
    crate::exact::dot(y, &gy)
}

/// `G = L D L^T`, `L` unit lower triangular. Fails unless `G` is positive definite.
fn ldl(g: &RatMatrix) -> Result<(RatMatrix, Vec<Rat>)> {
    let n = g.rows();
    let mut l = RatMatrix::identity(n);
    let mut d = vec![Rat::zero(); n];
    for j in 0..n {
        let mut dj = g[(j, j)].clone();
        for k in 0..j {
            dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
        }
        if !dj.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for i in j + 1..n {
            let mut v = g[(i, j)].clone();
            for k in 0..j {
                v -= &l[(i, k)] * &l[(j, k)] * &d[k];
            }
            l[(i, j)] = v / &dj;
        }
        d[j] = dj;
    }
    Ok((l, d))
}

/// All integer points `x` with `(x - c)^T G (x - c) = r2`.
///
/// Fails with [`Error::NotEmpty`] if some integer point lies strictly inside
/// the sphere, and with [`Error::NotPositiveDefinite`] for a bad form.
pub fn enumerate_sphere(g: &RatMatrix, c: &[Rat], r2: &Rat) -> Result<Vec<Vec<i64>>> {
    let n = g.rows();
    if !g.is_square() || c.len() != n {
        return Err(Error::Dimension { expected: n, found: c.len() });
    }
    let (l, d) = ldl(g)?;
    let mut scan = Scan { l: &l, d: &d, c, x: vec![0; n], y: vec![Rat::zero(); n], out: Vec::new() };
    scan.level(n, r2.clone())?;
    let mut out = scan.out;
    out.sort();
    Ok(out)
}

struct Scan<'a> {
    l: &'a RatMatrix,
    d: &'a [Rat],
    c: &'a [Rat],
    x: Vec<i64>,
    y: Vec<Rat>,
    out: Vec<Vec<i64>>,
}

impl Scan<'_> {
    /// Assigns coordinate `k - 1` given coordinates `k..n`, with `budget` left.
    fn level(&mut self, k: usize, budget: Rat) -> Result<()> {
        if k == 0 {
            if budget.is_zero() {
                self.out.push(self.x.clone());
                return Ok(());
            }
            return Err(Error::NotEmpty(self.x.clone()));
        }
        let k = k - 1;
        let n = self.x.len();
        let mut shift = Rat::zero();
        for j in k + 1..n {
            shift += &self.l[(j, k)] * &self.y[j];
        }
        // term = D_k (x_k - t)^2 with t = c_k - shift
        let t = &self.c[k] - shift;
        let start = t.floor().to_integer().to_i64().expect("coordinate fits in i64");
        let dk = &self.d[k];
        let visit = |this: &mut Self, x: i64| -> Result<bool> {
            let u = rat(x) - &t;
            let term = dk * &u * &u;
            if term > budget {
                return Ok(false);
            }
            this.x[k] = x;
            this.y[k] = rat(x) - &this.c[k];
            this.level(k, &budget - term).map(|_| true)
        };
        // descending from floor(t), then ascending from floor(t) + 1
        let mut x = start;
        while visit(self, x)? {
            x -= 1;
        }
        let mut x = start + 1;
        while visit(self, x)? {
            x += 1;
        }
        Ok(())
    }
}

/// Vertices and annulator of the Delaunay polytope carried by a non-degenerate `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelaunayRealization {
    pub gram: RatMatrix,
    pub center: Vec<Rat>,
    pub radius_sq: Rat,
    pub vertices: Vec<Vec<i64>>,
    pub ann: Vec<BVector>,
}

/// `x -> (1 - sum x, x_1, ..., x_n)`.
pub fn vertex_to_bvector(x: &[i64]) -> BVector {
    let mut b = Vec::with_capacity(x.len() + 1);
    b.push(1 - x.iter().sum::<i64>());
    b.extend_from_slice(x);
    BVector::new(b).expect("sum is one by construction")
}

pub fn realize(d: &DistVec) -> Result<DelaunayRealization> {
    let gram = gram_from_distance(d);
    let (center, radius_sq) = circumsphere_of_gram(&gram)?;
    let vertices = enumerate_sphere(&gram, &center, &radius_sq)?;
    let ann = vertices.iter().map(|x| vertex_to_bvector(x)).collect();
    Ok(DelaunayRealization { gram, center, radius_sq, vertices, ann })
}

/// `Ann(d)`: all `b` with coordinate sum 1 and `H(b) d = 0`, for non-degenerate `d`.
///
/// Hypermetricity is not re-checked here; a non-hypermetric input shows up as
/// [`Error::NotEmpty`].
pub fn annulator(d: &DistVec) -> Result<Vec<BVector>> {
    Ok(realize(d)?.ann)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::to_rats;
    use crate::hypercone::{all_cuts, cut_ints, h_eval, pair_count};

    fn dv(n: usize, v: &[i64]) -> DistVec {
        DistVec::from_ints(n, v).unwrap()
    }

    fn cube3() -> DistVec {
        // d(0,i) = 1, d(i,j) = 2
        dv(3, &[1, 1, 1, 2, 2, 2])
    }

    #[test]
    fn gram_examples() {
        assert_eq!(gram_from_distance(&cube3()), RatMatrix::identity(3));
        assert_eq!(gram_from_distance(&DistVec::zero(3)), RatMatrix::zeros(3, 3));
        let g = gram_from_distance(&dv(2, &[1, 1, 1]));
        assert_eq!(g, RatMatrix::from_rows(&[vec![rat(1), ratio(1, 2)], vec![ratio(1, 2), rat(1)]]).unwrap());
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(is_nondegenerate(&cube3()).unwrap());
        // delta_{1} for n = 2: d(0,1)=1, d(0,2)=0, d(1,2)=1
        assert!(!is_nondegenerate(&dv(2, &[1, 0, 1])).unwrap());
        assert_eq!(is_nondegenerate(&dv(2, &[1, 1, 3])), Err(Error::NotHypermetric));
    }

    #[test]
    fn circumsphere_examples() {
        let (c, r2) = circumsphere(&cube3()).unwrap();
        assert_eq!(c, vec![ratio(1, 2); 3]);
        assert_eq!(r2, ratio(3, 4));
        let (_, r2) = circumsphere(&dv(2, &[1, 1, 1])).unwrap();
        assert_eq!(r2, ratio(1, 3));
        let (c, r2) = circumsphere(&dv(2, &[1, 1, 2])).unwrap();
        assert_eq!(r2, ratio(1, 2));
        assert_eq!(c, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(circumsphere(&dv(2, &[1, 0, 1])), Err(Error::Degenerate));
    }

    #[test]
    fn sphere_examples() {
        let r = realize(&cube3()).unwrap();
        assert_eq!(r.vertices.len(), 8);
        assert!(r.vertices.iter().all(|x| x.iter().all(|&v| v == 0 || v == 1)));
        assert_eq!(realize(&dv(2, &[1, 1, 1])).unwrap().vertices.len(), 3);
        let rect = realize(&dv(2, &[1, 1, 2])).unwrap();
        assert_eq!(rect.vertices, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn sphere_rejects_indefinite_and_interior() {
        let g = RatMatrix::from_rows(&[vec![rat(1), rat(2)], vec![rat(2), rat(1)]]).unwrap();
        assert_eq!(enumerate_sphere(&g, &[rat(0), rat(0)], &rat(1)), Err(Error::NotPositiveDefinite));
        // radius too large: the center's neighbourhood contains lattice points strictly inside
        let g = RatMatrix::identity(2);
        assert!(matches!(enumerate_sphere(&g, &[rat(0), rat(0)], &rat(2)), Err(Error::NotEmpty(_))));
    }

    #[test]
    fn annulator_examples() {
        let ann = annulator(&cube3()).unwrap();
        let mut got: Vec<Vec<i64>> = ann.iter().map(|b| b.coords().to_vec()).collect();
        got.sort();
        let mut expected = vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![-1, 1, 1, 0],
            vec![-1, 0, 1, 1],
            vec![-1, 1, 0, 1],
            vec![-2, 1, 1, 1],
        ];
        expected.sort();
        assert_eq!(got, expected);
        let simplex = annulator(&dv(2, &[1, 1, 1])).unwrap();
        assert!(simplex.iter().all(BVector::is_basic));
        assert_eq!(simplex.len(), 3);
        for b in &ann {
            assert_eq!(h_eval(b, &cube3()).unwrap(), rat(0));
        }
    }

    fn box_scan(g: &RatMatrix, c: &[Rat], r2: &Rat, lo: i64, hi: i64) -> (Vec<Vec<i64>>, usize) {
        let n = g.rows();
        let mut x = vec![lo; n];
        let mut on = Vec::new();
        let mut inside = 0;
        loop {
            let y: Vec<Rat> = x.iter().zip(c).map(|(&xi, ci)| rat(xi) - ci).collect();
            let q = quad_form(g, &y);
            if q == *r2 {
                on.push(x.clone());
            } else if q < *r2 {
                inside += 1;
            }
            let mut k = 0;
            while k < n && x[k] == hi {
                x[k] = lo;
                k += 1;
            }
            if k == n {
                break;
            }
            x[k] += 1;
        }
        on.sort();
        (on, inside)
    }

    #[test]
    fn agrees_with_box_scan_on_random_hypermetrics() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(2..=3);
            let cuts = all_cuts(n);
            let mut d = vec![0i64; pair_count(n)];
            for s in &cuts {
                if rng.gen_bool(0.6) {
                    let w = rng.gen_range(1..=4);
                    for (a, b) in d.iter_mut().zip(cut_ints(s)) {
                        *a += w * b;
                    }
                }
            }
            let d = DistVec::new(n, to_rats(&d)).unwrap();
            if gram_det(&d).is_zero() {
                continue;
            }
            let r = realize(&d).unwrap();
            let (scan, inside) = box_scan(&r.gram, &r.center, &r.radius_sq, -5, 6);
            assert_eq!(inside, 0);
            assert_eq!(scan, r.vertices);
            assert!(r.ann.len() > n);
            for b in &r.ann {
                assert_eq!(h_eval(b, &d).unwrap(), rat(0));
            }
            checked += 1;
        }
    }
}
