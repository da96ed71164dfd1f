//! Transport plans and solver reports.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::problem::CostMatrix;

/// A bijection from row indices to column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j >= n || seen[j] {
                return Err(Error::DimensionMismatch {
                    what: "permutation image",
                    expected: n,
                    got: j,
                });
            }
            seen[j] = true;
        }
        Ok(Permutation { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, row: usize) -> usize {
        self.map[row]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// Row/column pairs in row order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().copied().enumerate()
    }

    /// Largest cost along the permutation graph.
    pub fn bottleneck(&self, cost: &CostMatrix) -> f64 {
        self.pairs()
            .map(|(i, j)| cost.get(i, j))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A sparse coupling: positive masses on (row, col) pairs, stored in
/// row-major order. Zero-mass entries are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    entries: Vec<(usize, usize, BigRational)>,
}

impl Coupling {
    pub fn new(mut entries: Vec<(usize, usize, BigRational)>) -> Self {
        entries.retain(|(_, _, mass)| !mass.is_zero());
        entries.sort_by_key(|&(i, j, _)| (i, j));
        Coupling { entries }
    }

    pub fn entries(&self) -> &[(usize, usize, BigRational)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|&(i, j, _)| (i, j))
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.entries
            .binary_search_by_key(&(row, col), |&(i, j, _)| (i, j))
            .is_ok()
    }

    /// Exact per-row mass totals.
    pub fn row_sums(&self, n: usize) -> Vec<BigRational> {
        let mut sums = vec![BigRational::zero(); n];
        for (i, _, mass) in &self.entries {
            sums[*i] += mass;
        }
        sums
    }

    /// Exact per-column mass totals.
    pub fn col_sums(&self, m: usize) -> Vec<BigRational> {
        let mut sums = vec![BigRational::zero(); m];
        for (_, j, mass) in &self.entries {
            sums[*j] += mass;
        }
        sums
    }

    /// Largest cost carried by a positive mass.
    pub fn bottleneck(&self, cost: &CostMatrix) -> f64 {
        self.support()
            .map(|(i, j)| cost.get(i, j))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Witness plan attached to a solve report.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Permutation(Permutation),
    Coupling(Coupling),
}

impl Plan {
    pub fn contains(&self, row: usize, col: usize) -> bool {
        match self {
            Plan::Permutation(p) => row < p.len() && p.apply(row) == col,
            Plan::Coupling(c) => c.contains(row, col),
        }
    }

    pub fn bottleneck(&self, cost: &CostMatrix) -> f64 {
        match self {
            Plan::Permutation(p) => p.bottleneck(cost),
            Plan::Coupling(c) => c.bottleneck(cost),
        }
    }
}

/// Outcome of an exact sweep solve: the optimal bottleneck value, the edge
/// whose admission made the instance feasible, a witness plan, and the number
/// of sweep iterations `k` (so the admitted prefix has length `k`).
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub value: f64,
    pub witness_edge: (usize, usize),
    pub plan: Plan,
    pub iterations: usize,
}

/// Approximate solution of the relaxed minimax problem: a doubly stochastic
/// plan and the smallest certified level `value`, accurate to `tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedSolution {
    pub value: f64,
    /// Row-major n x n doubly stochastic matrix.
    pub plan: Vec<f64>,
    pub n: usize,
    /// Width of the final bisection bracket.
    pub tolerance: f64,
    /// Number of feasibility probes spent.
    pub probes: usize,
}

impl RelaxedSolution {
    pub fn plan_entry(&self, row: usize, col: usize) -> f64 {
        self.plan[row * self.n + col]
    }

    /// max over (i, j) of plan[i,j] * C[i,j].
    pub fn weighted_bottleneck(&self, cost: &CostMatrix) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                best = best.max(self.plan_entry(i, j) * cost.get(i, j));
            }
        }
        best
    }
}
