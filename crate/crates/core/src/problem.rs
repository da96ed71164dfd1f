//! Problem data: the cost matrix, exact marginals, and the shared
//! non-decreasing edge ordering all the sweep solvers consume.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::rational::parse_rational;

/// Largest common denominator accepted when scaling weights to integers.
pub const DEFAULT_SCALE_CAP: u64 = 1_000_000_000_000;

/// Dense n x m matrix of pairwise transport costs. Entries are finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    /// Build from row-major data, rejecting empty dimensions and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                what: "cost matrix dimensions must be positive",
                expected: 1,
                got: 0,
            });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "cost matrix data length",
                expected: rows * cols,
                got: data.len(),
            });
        }
        for (t, &value) in data.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    row: t / cols,
                    col: t % cols,
                });
            }
        }
        Ok(CostMatrix { rows, cols, data })
    }

    /// Build from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    what: "cost matrix row length",
                    expected: m,
                    got: row.len(),
                });
            }
        }
        CostMatrix::new(n, m, rows.concat())
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

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    /// Largest absolute entry; 0 for the degenerate all-zero matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Apply a function entrywise, keeping the shape.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        CostMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }
}

impl std::ops::Index<(usize, usize)> for CostMatrix {
    type Output = f64;
    fn index(&self, (row, col): (usize, usize)) -> &f64 {
        &self.data[row * self.cols + col]
    }
}

/// Exact source and target weights, plus the common integer scale `D` that
/// turns every weight into an integer (`D * a_i` and `D * b_j`).
#[derive(Debug, Clone, PartialEq)]
pub struct Marginals {
    a: Vec<BigRational>,
    b: Vec<BigRational>,
    scale: u64,
    scaled_a: Vec<i64>,
    scaled_b: Vec<i64>,
}

impl Marginals {
    /// Validate weights against a cost matrix: matching lengths, strict
    /// positivity, exactly equal total mass, and a representable scale.
    pub fn validate(
        cost: &CostMatrix,
        a: Vec<BigRational>,
        b: Vec<BigRational>,
        scale_cap: u64,
    ) -> Result<Self> {
        if a.len() != cost.rows() {
            return Err(Error::DimensionMismatch {
                what: "source weight count",
                expected: cost.rows(),
                got: a.len(),
            });
        }
        if b.len() != cost.cols() {
            return Err(Error::DimensionMismatch {
                what: "target weight count",
                expected: cost.cols(),
                got: b.len(),
            });
        }
        for (index, w) in a.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight { side: 'a', index });
            }
        }
        for (index, w) in b.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight { side: 'b', index });
            }
        }

        let total_a: BigRational = a.iter().sum();
        let total_b: BigRational = b.iter().sum();
        if total_a != total_b {
            return Err(Error::MassMismatch {
                source_mass: crate::rational::format_rational(&total_a),
                target_mass: crate::rational::format_rational(&total_b),
            });
        }

        let cap = BigInt::from(scale_cap);
        let mut scale = BigInt::from(1u32);
        for w in a.iter().chain(b.iter()) {
            scale = scale.lcm(w.denom());
            if scale > cap {
                return Err(Error::ScaleOverflow { cap: scale_cap });
            }
        }

        let to_scaled = |weights: &[BigRational]| -> Result<Vec<i64>> {
            weights
                .iter()
                .map(|w| {
                    let scaled = (w * BigRational::from_integer(scale.clone())).to_integer();
                    scaled
                        .to_i64()
                        .ok_or(Error::ScaleOverflow { cap: scale_cap })
                })
                .collect()
        };
        let scaled_a = to_scaled(&a)?;
        let scaled_b = to_scaled(&b)?;
        // Total supply must leave headroom for the flow sentinel.
        let total: i128 = scaled_a.iter().map(|&v| v as i128).sum();
        if total > (i64::MAX / 4) as i128 {
            return Err(Error::ScaleOverflow { cap: scale_cap });
        }

        let scale = scale.to_u64().expect("scale fits: checked against cap");
        Ok(Marginals {
            a,
            b,
            scale,
            scaled_a,
            scaled_b,
        })
    }

    /// Uniform weights `1/n` and `1/m`, the documented default when no
    /// weight files are given.
    pub fn uniform(cost: &CostMatrix) -> Self {
        let n = cost.rows();
        let m = cost.cols();
        let a = vec![BigRational::new(BigInt::from(1), BigInt::from(n)); n];
        let b = vec![BigRational::new(BigInt::from(1), BigInt::from(m)); m];
        Marginals::validate(cost, a, b, DEFAULT_SCALE_CAP).expect("uniform weights always validate")
    }

    pub fn source(&self) -> &[BigRational] {
        &self.a
    }

    pub fn target(&self) -> &[BigRational] {
        &self.b
    }

    /// The common denominator `D`.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// `D * a_i` as integers.
    pub fn scaled_source(&self) -> &[i64] {
        &self.scaled_a
    }

    /// `D * b_j` as integers.
    pub fn scaled_target(&self) -> &[i64] {
        &self.scaled_b
    }

    /// Total scaled mass, the saturation target for feasibility flows.
    pub fn total_scaled(&self) -> i64 {
        self.scaled_a.iter().sum()
    }

    /// True when n = m and all weights are one common value.
    pub fn is_uniform_square(&self) -> bool {
        self.a.len() == self.b.len() && self.a.iter().chain(self.b.iter()).all(|w| *w == self.a[0])
    }
}

/// Parse weight texts (decimal or `p/q`) and validate them against the cost
/// matrix. This is the single entry gate for problem input.
pub fn validate_problem<S: AsRef<str>>(cost: &CostMatrix, a: &[S], b: &[S]) -> Result<Marginals> {
    validate_problem_with_cap(cost, a, b, DEFAULT_SCALE_CAP)
}

pub fn validate_problem_with_cap<S: AsRef<str>>(
    cost: &CostMatrix,
    a: &[S],
    b: &[S],
    scale_cap: u64,
) -> Result<Marginals> {
    let parse_all = |texts: &[S]| -> Result<Vec<BigRational>> {
        texts.iter().map(|t| parse_rational(t.as_ref())).collect()
    };
    Marginals::validate(cost, parse_all(a)?, parse_all(b)?, scale_cap)
}

/// All n*m index pairs of a cost matrix, ordered by non-decreasing cost with
/// ties broken in row-major order. The sweep solvers admit edges in exactly
/// this sequence, so the ordering is the determinism contract of the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedEdgeList {
    pairs: Vec<(usize, usize)>,
}

pub fn argsort_edges(cost: &CostMatrix) -> SortedEdgeList {
    let mut pairs: Vec<(usize, usize)> = (0..cost.rows())
        .flat_map(|i| (0..cost.cols()).map(move |j| (i, j)))
        .collect();
    // Entries are validated finite, so partial_cmp never fails.
    pairs.sort_by(|&(i1, j1), &(i2, j2)| {
        cost.get(i1, j1)
            .partial_cmp(&cost.get(i2, j2))
            .expect("finite costs are totally ordered")
            .then(i1.cmp(&i2))
            .then(j1.cmp(&j2))
    });
    SortedEdgeList { pairs }
}

impl SortedEdgeList {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// 0-based position lookup; the k-th admitted edge of the sweep is `get(k - 1)`.
    pub fn get(&self, index: usize) -> (usize, usize) {
        self.pairs[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn as_slice(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// Binary mask of currently admitted edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMask {
    rows: usize,
    cols: usize,
    admitted: Vec<bool>,
}

impl SupportMask {
    pub fn empty(rows: usize, cols: usize) -> Self {
        SupportMask {
            rows,
            cols,
            admitted: vec![false; rows * cols],
        }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        SupportMask {
            rows,
            cols,
            admitted: vec![true; rows * cols],
        }
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: &[(usize, usize)]) -> Self {
        let mut mask = SupportMask::empty(rows, cols);
        for &(i, j) in pairs {
            mask.admit(i, j);
        }
        mask
    }

    /// The first `count` edges of a sorted list, i.e. the sweep state after
    /// `count` iterations.
    pub fn prefix(rows: usize, cols: usize, edges: &SortedEdgeList, count: usize) -> Self {
        SupportMask::from_pairs(rows, cols, &edges.as_slice()[..count])
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

    pub fn admit(&mut self, row: usize, col: usize) {
        self.admitted[row * self.cols + col] = true;
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.admitted[row * self.cols + col]
    }

    /// Admitted columns of one row, ascending.
    pub fn row_neighbors(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        let start = row * self.cols;
        self.admitted[start..start + self.cols]
            .iter()
            .enumerate()
            .filter_map(|(j, &on)| on.then_some(j))
    }

    pub fn count(&self) -> usize {
        self.admitted.iter().filter(|&&on| on).count()
    }
}
