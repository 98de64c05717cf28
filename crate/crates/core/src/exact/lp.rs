//! Exact phase-one simplex.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;
use crate::{Error, Result};

/// Outcome of an exact feasibility problem `sum_l lambda_l g_l = target`, `lambda >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// Nonnegative coefficients (one per generator) and the indices where they are positive.
    Feasible { lambda: Vec<Rat>, support: Vec<usize> },
    /// A Farkas vector `y` with `y . g_l >= 0` for every generator and `y . target < 0`.
    Infeasible { farkas: Vec<Rat> },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }

    pub fn lambda(&self) -> Option<&[Rat]> {
        match self {
            Feasibility::Feasible { lambda, .. } => Some(lambda),
            Feasibility::Infeasible { .. } => None,
        }
    }
}

/// Decides whether `target` is a nonnegative combination of `generators`.
///
/// Revised phase-one simplex: the basis inverse is kept exactly, generators
/// are scaled to integer columns for pricing. Dantzig's rule is used until a
/// run of degenerate pivots, then Bland's rule for the rest of the solve.
/// Both outcomes are checked exactly before being returned.
pub fn lp_feasible(generators: &[Vec<Rat>], target: &[Rat]) -> Result<Feasibility> {
    let m = target.len();
    let k = generators.len();
    for g in generators {
        if g.len() != m {
            return Err(Error::Dimension { expected: m, found: g.len() });
        }
    }
    let negated: Vec<bool> = target.iter().map(|t| t.is_negative()).collect();
    let scales: Vec<BigInt> =
        generators.iter().map(|g| g.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))).collect();
    let cols: Vec<Vec<BigInt>> = generators
        .iter()
        .zip(&scales)
        .map(|(g, l)| {
            (0..m)
                .map(|i| {
                    let v = (&g[i] * l).to_integer();
                    if negated[i] {
                        -v
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();

    // basic[r] < k is a generator, k + i is the artificial of row i.
    let mut basic: Vec<usize> = (k..k + m).collect();
    let mut binv: Vec<Vec<Rat>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    let mut x: Vec<Rat> = target.iter().map(|t| t.abs()).collect();
    let mut bland = false;
    let mut degenerate_run = 0;

    let y = loop {
        // Phase-one multipliers: sum of the basis-inverse rows held by artificials.
        let mut y = vec![Rat::zero(); m];
        for r in (0..m).filter(|&r| basic[r] >= k) {
            for (yi, b) in y.iter_mut().zip(&binv[r]) {
                *yi += b;
            }
        }
        let objective = (0..m).filter(|&r| basic[r] >= k).fold(Rat::zero(), |acc, r| acc + &x[r]);
        if objective.is_zero() {
            break y;
        }
        let common = y.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let yi: Vec<BigInt> = y.iter().map(|v| (v * &common).to_integer()).collect();
        let price = |j: usize| -> BigInt { yi.iter().zip(&cols[j]).map(|(a, b)| a * b).sum() };
        let mut enter: Option<(usize, BigInt)> = None;
        for j in 0..k {
            let p = price(j);
            if !p.is_positive() {
                continue;
            }
            if bland {
                enter = Some((j, p));
                break;
            }
            if enter.as_ref().map_or(true, |(_, best)| p > *best) {
                enter = Some((j, p));
            }
        }
        let Some((enter, _)) = enter else {
            break y;
        };
        let u: Vec<Rat> = binv
            .iter()
            .map(|row| row.iter().zip(&cols[enter]).fold(Rat::zero(), |acc, (b, a)| acc + b * a))
            .collect();
        let mut leave: Option<(usize, Rat)> = None;
        for r in 0..m {
            if !u[r].is_positive() {
                continue;
            }
            let ratio = &x[r] / &u[r];
            let better = match &leave {
                None => true,
                Some((best_r, best)) => ratio < *best || (ratio == *best && basic[r] < basic[*best_r]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // The phase-one objective is bounded below by zero, so a leaving row exists.
        let (row, step) = leave.expect("phase-one simplex is bounded");
        if step.is_zero() {
            degenerate_run += 1;
            bland |= degenerate_run > 2 * m;
        } else {
            degenerate_run = 0;
        }
        let inv = u[row].recip();
        binv[row].iter_mut().for_each(|v| *v *= &inv);
        x[row] *= &inv;
        let (pivot_row, pivot_x) = (binv[row].clone(), x[row].clone());
        for r in (0..m).filter(|&r| r != row && !u[r].is_zero()) {
            for (v, p) in binv[r].iter_mut().zip(&pivot_row) {
                *v -= &u[r] * p;
            }
            x[r] -= &u[r] * &pivot_x;
        }
        basic[row] = enter;
    };

    let objective = (0..m).filter(|&r| basic[r] >= k).fold(Rat::zero(), |acc, r| acc + &x[r]);
    if objective.is_zero() {
        let mut lambda = vec![Rat::zero(); k];
        for r in (0..m).filter(|&r| basic[r] < k) {
            lambda[basic[r]] = &x[r] * &scales[basic[r]];
        }
        let support: Vec<usize> = (0..k).filter(|&j| lambda[j].is_positive()).collect();
        for i in 0..m {
            let s = support.iter().fold(Rat::zero(), |acc, &j| acc + &lambda[j] * &generators[j][i]);
            if s != target[i] {
                return Err(Error::SelfCheck("simplex solution does not reproduce the target".into()));
            }
        }
        Ok(Feasibility::Feasible { lambda, support })
    } else {
        let farkas: Vec<Rat> = y.into_iter().zip(&negated).map(|(v, &neg)| if neg { v } else { -v }).collect();
        let on_target = super::dot(&farkas, target);
        if !on_target.is_negative() || generators.iter().any(|g| super::dot(&farkas, g).is_negative()) {
            return Err(Error::SelfCheck("Farkas certificate failed verification".into()));
        }
        Ok(Feasibility::Infeasible { farkas })
    }
}
