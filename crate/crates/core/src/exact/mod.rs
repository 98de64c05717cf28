//! Exact rational and integer linear algebra, plus exact LP feasibility.
//!
//! Everything here works over [`Rat`] (arbitrary precision, always in lowest
//! terms) or over machine integers with checked arithmetic that falls back to
//! rationals on overflow. There are no tolerances anywhere.

mod intrank;
mod lp;
mod matrix;

pub use intrank::{int_rank, IncrementalRank};
pub use lp::{lp_feasible, Feasibility};
pub use matrix::RatMatrix;

use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary precision rational number.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or `p`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let r = Rat::from_str(s).ok()?;
    Some(r)
}

/// Formats as `p/q`, or `p` when the denominator is 1.
pub fn fmt_rat(r: &Rat) -> String {
    use alloc::string::ToString;
    r.to_string()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn int_dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn is_one_or_minus_one(r: &Rat) -> bool {
    r.is_one() || (-r).is_one()
}

/// Exact determinant of a square matrix.
pub fn det(m: &RatMatrix) -> crate::Result<Rat> {
    m.det()
}

/// Exact rank.
pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

/// One exact solution of `a x = rhs`, or `None` if the system is inconsistent.
pub fn solve(a: &RatMatrix, rhs: &[Rat]) -> crate::Result<Option<Vec<Rat>>> {
    a.solve(rhs)
}

/// Basis of the right null space; empty means the kernel is trivial.
pub fn kernel(a: &RatMatrix) -> Vec<Vec<Rat>> {
    a.kernel()
}
