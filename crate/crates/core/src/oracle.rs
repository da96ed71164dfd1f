//! Reference implementations kept deliberately naive and structurally
//! unrelated to the production solvers, so the two can cross-check each
//! other in tests. Everything here is exponential or worse; the guards
//! return `TooLarge` instead of letting a test hang.

use crate::error::{Error, Result};
use crate::problem::{CostMatrix, Marginals, SupportMask};

/// Largest side length `brute_force_monge` will enumerate (9! permutations).
pub const BRUTE_FORCE_LIMIT: usize = 9;

/// Largest side length the subset-enumeration oracles accept.
pub const SUBSET_LIMIT: usize = 20;

/// Minimum over all permutations of the largest assigned entry, by direct
/// enumeration.
pub fn brute_force_monge(cost: &CostMatrix) -> Result<f64> {
    if !cost.is_square() {
        return Err(Error::NotSquare {
            rows: cost.rows(),
            cols: cost.cols(),
        });
    }
    let n = cost.rows();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut used = vec![false; n];
    let mut best = f64::INFINITY;
    descend(cost, 0, f64::NEG_INFINITY, &mut used, &mut best);
    Ok(best)
}

fn descend(cost: &CostMatrix, row: usize, current_max: f64, used: &mut [bool], best: &mut f64) {
    if row == cost.rows() {
        *best = best.min(current_max);
        return;
    }
    for col in 0..cost.cols() {
        if !used[col] {
            used[col] = true;
            descend(
                cost,
                row + 1,
                current_max.max(cost.get(row, col)),
                used,
                best,
            );
            used[col] = false;
        }
    }
}

/// Coupling feasibility on a fixed support, decided by the cut condition:
/// mass can be routed iff every set of rows demands no more than its
/// neighborhood of columns offers. Enumerates all 2^n row subsets; shares
/// nothing with the flow-based checker.
pub fn independent_feasibility(support: &SupportMask, marg: &Marginals) -> Result<bool> {
    let n = support.rows();
    let m = support.cols();
    if n > SUBSET_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: SUBSET_LIMIT,
        });
    }
    if m > SUBSET_LIMIT {
        return Err(Error::TooLarge {
            size: m,
            limit: SUBSET_LIMIT,
        });
    }
    let a = marg.scaled_source();
    let b = marg.scaled_target();
    assert_eq!(a.len(), n);
    assert_eq!(b.len(), m);

    let neighbors: Vec<u32> = (0..n)
        .map(|i| support.row_neighbors(i).fold(0u32, |acc, j| acc | 1 << j))
        .collect();

    for subset in 1u32..(1 << n) {
        let mut demand = 0i64;
        let mut reach = 0u32;
        let mut bits = subset;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            demand += a[i];
            reach |= neighbors[i];
            bits &= bits - 1;
        }
        let mut offer = 0i64;
        while reach != 0 {
            let j = reach.trailing_zeros() as usize;
            offer += b[j];
            reach &= reach - 1;
        }
        if demand > offer {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Optimal bottleneck over couplings, found by walking the distinct cost
/// values upward and asking `independent_feasibility` about each level set.
pub fn threshold_scan(cost: &CostMatrix, marg: &Marginals) -> Result<f64> {
    let n = cost.rows();
    let m = cost.cols();
    let mut values: Vec<f64> = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| cost.get(i, j))
        .collect();
    values.sort_by(|x, y| x.partial_cmp(y).expect("finite costs"));
    values.dedup();

    for v in values {
        let mut support = SupportMask::empty(n, m);
        for i in 0..n {
            for j in 0..m {
                if cost.get(i, j) <= v {
                    support.admit(i, j);
                }
            }
        }
        if independent_feasibility(&support, marg)? {
            return Ok(v);
        }
    }
    unreachable!("the full support always carries a coupling")
}
