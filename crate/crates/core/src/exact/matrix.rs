use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::Rat;
use crate::{Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<_> = self.row(r).iter().map(|x| alloc::format!("{x}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, found: data.len() });
        }
        Ok(RatMatrix { rows, cols, data })
    }

    /// Builds a matrix from rows of equal length. An empty slice gives a 0x0 matrix.
    pub fn from_rows(rows: &[Vec<Rat>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension { expected: cols, found: r.len() });
            }
            data.extend(r.iter().cloned());
        }
        Ok(RatMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<Rat>> = rows.iter().map(|r| super::to_rats(r)).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|r| super::dot(self.row(r), v)).collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Fraction-free (Bareiss) forward elimination in place. Returns the pivot
    /// columns and the number of row swaps. After the call, row `k` holds the
    /// Bareiss row for pivot `k`; the last pivot entry equals the leading
    /// principal minor of full rank (up to the swap sign).
    fn bareiss(&mut self) -> (Vec<usize>, usize) {
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut prev = Rat::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                self.swap_rows(p, r);
                swaps += 1;
            }
            let piv = self[(r, c)].clone();
            for i in r + 1..self.rows {
                let factor = self[(i, c)].clone();
                for j in c + 1..self.cols {
                    let v = (&piv * &self[(i, j)] - &factor * &self[(r, j)]) / &prev;
                    self[(i, j)] = v;
                }
                self[(i, c)] = Rat::zero();
            }
            // Columns left of `c` in rows below are already zero.
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (pivots, swaps)
    }

    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rat::one());
        }
        let mut m = self.clone();
        let (pivots, swaps) = m.bareiss();
        if pivots.len() < n {
            return Ok(Rat::zero());
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if swaps % 2 == 1 { -d } else { d })
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.bareiss().0.len()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = &f * &self[(r, j)];
                    self[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn solve(&self, rhs: &[Rat]) -> Result<Option<Vec<Rat>>> {
        if rhs.len() != self.rows {
            return Err(Error::Dimension { expected: self.rows, found: rhs.len() });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = rhs[r].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Result<Option<RatMatrix>> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rat::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = aug[(r, n + c)].clone();
            }
        }
        Ok(Some(inv))
    }
}

impl core::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        RatMatrix::from_int_rows(&rows).unwrap()
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(RatMatrix::identity(3).det().unwrap(), rat(1));
        assert_eq!(m(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]).det().unwrap(), rat(8));
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]).det().unwrap(), rat(0));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), rat(-1));
        assert_eq!(m(&[&[2, 1, 3], &[0, 4, 1], &[5, 2, 0]]).det().unwrap(), rat(-59));
    }

    #[test]
    fn det_rejects_non_square() {
        assert!(matches!(m(&[&[1, 2, 3]]).det(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn rank_cases() {
        assert_eq!(RatMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(RatMatrix::identity(5).rank(), 5);
        assert_eq!(m(&[&[1, 2], &[2, 4], &[3, 6]]).rank(), 1);
    }

    #[test]
    fn solve_cases() {
        let x = RatMatrix::identity(3).solve(&[rat(1), rat(2), rat(3)]).unwrap().unwrap();
        assert_eq!(x, vec![rat(1), rat(2), rat(3)]);
        let a = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(a.solve(&[rat(1), rat(2)]).unwrap(), None);
        assert!(a.solve(&[rat(1)]).is_err());
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = a.solve(&[rat(1), rat(2)]).unwrap().unwrap();
        assert_eq!(x, vec![ratio(1, 5), ratio(3, 5)]);
    }

    #[test]
    fn kernel_cases() {
        assert!(RatMatrix::identity(4).kernel().is_empty());
        let k = m(&[&[1, 1, 1]]).kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(&v[0] + &v[1] + &v[2], rat(0));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(3));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse().unwrap(), None);
    }
}
