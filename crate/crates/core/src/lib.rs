//! Exact solvers for discrete bottleneck (infinity) optimal transport.
//!
//! Two points of view on the same question — how small can the largest cost
//! actually used be? — and one deliberate relaxation of it:
//!
//! * [`solve_monge`]: minimize over permutations the largest assigned entry.
//! * [`solve_kantorovich`]: minimize over couplings with prescribed marginals
//!   the largest entry carrying positive mass. Marginals are exact rationals;
//!   the answer is exact.
//! * [`solve_relaxed`]: minimize over doubly stochastic matrices the largest
//!   *weighted* entry `P[i,j] * C[i,j]`. This one is a genuinely different
//!   (and smaller) optimum, solved to a requested tolerance.
//!
//! The exact solvers report a two-sided certificate: the sorted-edge prefix
//! just below the reported stopping index is infeasible, the prefix at it is
//! feasible, and the returned plan uses the stopping edge.

pub mod error;
pub mod flow;
pub mod matching;
pub mod oracle;
pub mod plan;
pub mod problem;
pub mod rational;
pub mod solvers;

pub use error::{Error, Result};
pub use flow::check_coup;
pub use matching::check_perm;
pub use plan::{Coupling, Permutation, Plan, RelaxedSolution, SolveReport};
pub use problem::{
    argsort_edges, validate_problem, validate_problem_with_cap, CostMatrix, Marginals,
    SortedEdgeList, SupportMask, DEFAULT_SCALE_CAP,
};
pub use rational::{format_rational, parse_rational};
pub use solvers::{
    default_relaxed_tolerance, solve_bisect, solve_kantorovich, solve_kantorovich_with,
    solve_monge, solve_monge_with, solve_relaxed, SweepMode,
};
