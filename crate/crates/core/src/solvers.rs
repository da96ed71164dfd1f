//! The headline solvers.
//!
//! All three exact solvers share one skeleton: admit edges in non-decreasing
//! cost order until the admitted support first becomes feasible; the cost of
//! the edge whose admission tipped feasibility is the optimal bottleneck
//! value, and the feasibility witness (permutation or coupling) is an optimal
//! plan. Feasibility means "contains a permutation" for the Monge problem and
//! "supports a coupling with the prescribed marginals" in general. The
//! relaxed minimax problem is different in kind (mass at the max matters, not
//! just support) and is solved approximately by bisection on the level `t`.

use crate::error::{Error, Result};
use crate::flow::{check_coup, FlowNetwork};
use crate::matching::{check_perm, extend_matching, Matching};
use crate::plan::{Plan, RelaxedSolution, SolveReport};
use crate::problem::{argsort_edges, CostMatrix, Marginals, SortedEdgeList, SupportMask};

/// How often the sweep re-tests feasibility.
///
/// `Batched` tests once per distinct cost value (and incrementally); the
/// reported value, stopping index and witness are identical to `PerEdge`,
/// which re-runs the from-scratch check after every single admitted edge,
/// including the vacuous check on the empty support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    #[default]
    Batched,
    PerEdge,
}

/// Exact minimum over permutations of the largest assigned cost.
pub fn solve_monge(cost: &CostMatrix) -> Result<SolveReport> {
    solve_monge_with(cost, SweepMode::Batched)
}

pub fn solve_monge_with(cost: &CostMatrix, mode: SweepMode) -> Result<SolveReport> {
    if !cost.is_square() {
        return Err(Error::NotSquare {
            rows: cost.rows(),
            cols: cost.cols(),
        });
    }
    let n = cost.rows();
    let edges = argsort_edges(cost);
    match mode {
        SweepMode::Batched => {
            let mut support = SupportMask::empty(n, n);
            let mut matching = Matching::empty(n, n);
            for (t, (i, j)) in edges.iter().enumerate() {
                support.admit(i, j);
                matching = extend_matching(&support, matching, (i, j));
                if matching.size() == n {
                    let sigma = matching
                        .to_permutation()
                        .expect("a perfect matching on a square support is a permutation");
                    return Ok(finish(cost, (i, j), t + 1, Plan::Permutation(sigma)));
                }
            }
            unreachable!("the full support contains the identity permutation")
        }
        SweepMode::PerEdge => {
            let mut support = SupportMask::empty(n, n);
            for count in 0..=edges.len() {
                if count > 0 {
                    let (i, j) = edges.get(count - 1);
                    support.admit(i, j);
                }
                if let Some(sigma) = check_perm(&support)? {
                    // The empty support never contains a permutation, so
                    // count >= 1 here.
                    let witness = edges.get(count - 1);
                    return Ok(finish(cost, witness, count, Plan::Permutation(sigma)));
                }
            }
            unreachable!("the full support contains the identity permutation")
        }
    }
}

/// Exact minimum over couplings of the largest cost carried by positive mass.
pub fn solve_kantorovich(cost: &CostMatrix, marg: &Marginals) -> Result<SolveReport> {
    solve_kantorovich_with(cost, marg, SweepMode::Batched)
}

pub fn solve_kantorovich_with(
    cost: &CostMatrix,
    marg: &Marginals,
    mode: SweepMode,
) -> Result<SolveReport> {
    check_dims(cost, marg)?;
    let edges = argsort_edges(cost);
    match mode {
        SweepMode::Batched => {
            let mut net = FlowNetwork::new(marg.scaled_source(), marg.scaled_target());
            let mut admitted = 0;
            while admitted < edges.len() {
                let group_start = admitted;
                let (gi, gj) = edges.get(admitted);
                let group_value = cost.get(gi, gj);
                while admitted < edges.len() {
                    let (i, j) = edges.get(admitted);
                    if cost.get(i, j) != group_value {
                        break;
                    }
                    net.add_support_edge(i, j);
                    admitted += 1;
                }
                net.max_flow();
                if net.is_saturated() {
                    let (k, coupling) = if admitted - group_start == 1 {
                        (admitted, net.to_coupling(marg.scale()))
                    } else {
                        settle_within_group(marg, &edges, group_start, admitted)
                    };
                    let witness = edges.get(k - 1);
                    return Ok(finish(cost, witness, k, Plan::Coupling(coupling)));
                }
            }
            unreachable!("the full support always carries a coupling")
        }
        SweepMode::PerEdge => {
            let mut support = SupportMask::empty(cost.rows(), cost.cols());
            for count in 0..=edges.len() {
                if count > 0 {
                    let (i, j) = edges.get(count - 1);
                    support.admit(i, j);
                }
                if let Some(coupling) = check_coup(&support, marg) {
                    // Positive weights make the empty support infeasible, so
                    // count >= 1 here.
                    let witness = edges.get(count - 1);
                    return Ok(finish(cost, witness, count, Plan::Coupling(coupling)));
                }
            }
            unreachable!("the full support always carries a coupling")
        }
    }
}

/// Within a tie group that turned the prefix feasible, locate the exact
/// stopping index: all group edges share one cost value, but the report
/// promises that the k-1 prefix is infeasible while the k prefix is not.
fn settle_within_group(
    marg: &Marginals,
    edges: &SortedEdgeList,
    group_start: usize,
    group_end: usize,
) -> (usize, crate::plan::Coupling) {
    let mut net = FlowNetwork::new(marg.scaled_source(), marg.scaled_target());
    for t in 0..group_start {
        let (i, j) = edges.get(t);
        net.add_support_edge(i, j);
    }
    net.max_flow();
    for t in group_start..group_end {
        let (i, j) = edges.get(t);
        net.add_support_edge(i, j);
        net.max_flow();
        if net.is_saturated() {
            return (t + 1, net.to_coupling(marg.scale()));
        }
    }
    unreachable!("the group admission made the prefix feasible")
}

/// Same optimum as `solve_kantorovich`, found by binary search over prefix
/// lengths of the sorted edge list instead of a linear sweep. Used as an
/// independent cross-check; needs only O(log(nm)) feasibility solves.
pub fn solve_bisect(cost: &CostMatrix, marg: &Marginals) -> Result<SolveReport> {
    check_dims(cost, marg)?;
    let edges = argsort_edges(cost);
    let feasible = |count: usize| {
        check_coup(
            &SupportMask::prefix(cost.rows(), cost.cols(), &edges, count),
            marg,
        )
    };
    // Feasibility is monotone in the prefix length and the full prefix is
    // always feasible; find the smallest feasible length.
    let mut lo = 1;
    let mut hi = edges.len();
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(mid).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let coupling = feasible(lo).expect("smallest feasible prefix");
    let witness = edges.get(lo - 1);
    Ok(finish(cost, witness, lo, Plan::Coupling(coupling)))
}

fn check_dims(cost: &CostMatrix, marg: &Marginals) -> Result<()> {
    if marg.source().len() != cost.rows() {
        return Err(Error::DimensionMismatch {
            what: "source weight count",
            expected: cost.rows(),
            got: marg.source().len(),
        });
    }
    if marg.target().len() != cost.cols() {
        return Err(Error::DimensionMismatch {
            what: "target weight count",
            expected: cost.cols(),
            got: marg.target().len(),
        });
    }
    Ok(())
}

fn finish(
    cost: &CostMatrix,
    witness: (usize, usize),
    iterations: usize,
    plan: Plan,
) -> SolveReport {
    debug_assert!(plan.contains(witness.0, witness.1));
    SolveReport {
        value: cost.get(witness.0, witness.1),
        witness_edge: witness,
        plan,
        iterations,
    }
}

/// Default accuracy for the relaxed solver: 1e-9 relative to the largest
/// entry magnitude (a tiny floor keeps the all-zero matrix workable).
pub fn default_relaxed_tolerance(cost: &CostMatrix) -> f64 {
    (1e-9 * cost.max_abs()).max(f64::MIN_POSITIVE)
}

/// Approximate minimum over doubly stochastic matrices P of
/// max P[i,j] * C[i,j], by bisection on the level t: a level is feasible iff
/// a doubly stochastic matrix exists under the entrywise caps t / C[i,j],
/// which is a capacitated flow question with unit row and column supplies.
pub fn solve_relaxed(cost: &CostMatrix, eps: f64) -> Result<RelaxedSolution> {
    if !cost.is_square() {
        return Err(Error::NotSquare {
            rows: cost.rows(),
            cols: cost.cols(),
        });
    }
    let n = cost.rows();
    for i in 0..n {
        for j in 0..n {
            if cost.get(i, j) < 0.0 {
                return Err(Error::NegativeCost { row: i, col: j });
            }
        }
    }
    if eps <= 0.0 || !eps.is_finite() {
        return Err(Error::InvalidTolerance { value: eps });
    }

    let mut probes = 1;
    if let Some(plan) = probe_level(cost, 0.0) {
        // Enough zero entries to route everything at no cost.
        return Ok(RelaxedSolution {
            value: 0.0,
            plan,
            n,
            tolerance: 0.0,
            probes,
        });
    }

    // A permutation is doubly stochastic, so the Monge value is a feasible
    // level and a certified upper end of the bracket.
    let monge = solve_monge(cost)?;
    let mut hi = monge.value;
    let mut lo = 0.0;
    let mut plan = vec![0.0; n * n];
    if let Plan::Permutation(sigma) = &monge.plan {
        for (i, j) in sigma.pairs() {
            plan[i * n + j] = 1.0;
        }
    }

    while hi - lo > eps {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket narrower than float resolution
        }
        probes += 1;
        match probe_level(cost, mid) {
            Some(p) => {
                hi = mid;
                plan = p;
            }
            None => lo = mid,
        }
    }

    Ok(RelaxedSolution {
        value: hi,
        plan,
        n,
        tolerance: hi - lo,
        probes,
    })
}

/// Can a doubly stochastic matrix respect the caps t / C[i,j]? Runs a
/// real-valued blocking-flow solve; entries with zero cost are uncapped.
fn probe_level(cost: &CostMatrix, level: f64) -> Option<Vec<f64>> {
    let n = cost.rows();
    let mut net = FloatDinic::new(n);
    for i in 0..n {
        for j in 0..n {
            let c = cost.get(i, j);
            let cap = if c == 0.0 {
                FloatDinic::UNCAPPED
            } else {
                (level / c).min(FloatDinic::UNCAPPED)
            };
            net.set_inner_cap(i, j, cap);
        }
    }
    let flow = net.max_flow();
    if (n as f64) - flow <= FloatDinic::FLOW_EPS {
        Some(net.inner_flows())
    } else {
        None
    }
}

#[derive(Debug, Clone)]
struct FloatArc {
    to: usize,
    cap: f64,
    rev: usize,
}

/// Blocking-flow network with real capacities, used only by the relaxed
/// solver. Nodes: source, n rows, n cols, sink; unit supplies and demands.
#[derive(Debug)]
struct FloatDinic {
    n: usize,
    arcs: Vec<Vec<FloatArc>>,
}

impl FloatDinic {
    /// Residuals at or below this are treated as exhausted.
    const FLOW_EPS: f64 = 1e-12;
    /// Stand-in for "no cap"; chosen larger than any total flow.
    const UNCAPPED: f64 = f64::MAX / 4.0;

    fn new(n: usize) -> Self {
        let mut net = FloatDinic {
            n,
            arcs: vec![Vec::new(); 2 * n + 2],
        };
        for i in 0..n {
            net.add_arc(0, 1 + i, 1.0);
        }
        for j in 0..n {
            net.add_arc(1 + n + j, 2 * n + 1, 1.0);
        }
        for i in 0..n {
            for j in 0..n {
                net.add_arc(1 + i, 1 + n + j, 0.0);
            }
        }
        net
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: f64) {
        let rev = self.arcs[to].len();
        let fwd = self.arcs[from].len();
        self.arcs[from].push(FloatArc { to, cap, rev });
        self.arcs[to].push(FloatArc {
            to: from,
            cap: 0.0,
            rev: fwd,
        });
    }

    fn set_inner_cap(&mut self, row: usize, col: usize, cap: f64) {
        // Row node arcs: [0] is the reverse of source->row, then the n
        // inner arcs in column order.
        self.arcs[1 + row][1 + col].cap = cap;
    }

    /// Flow pushed on the row->col arc equals its reverse residual.
    fn inner_flows(&self) -> Vec<f64> {
        let n = self.n;
        let mut plan = vec![0.0; n * n];
        for (i, row) in plan.chunks_mut(n).enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let arc = &self.arcs[1 + i][1 + j];
                *cell = self.arcs[arc.to][arc.rev].cap;
            }
        }
        plan
    }

    fn max_flow(&mut self) -> f64 {
        let sink = 2 * self.n + 1;
        let node_count = self.arcs.len();
        let mut total = 0.0;
        let mut level = vec![usize::MAX; node_count];
        loop {
            if !self.bfs_levels(&mut level, sink) {
                return total;
            }
            let mut next_arc = vec![0usize; node_count];
            loop {
                let pushed = self.push(0, f64::MAX, sink, &level, &mut next_arc);
                if pushed <= Self::FLOW_EPS {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn bfs_levels(&self, level: &mut [usize], sink: usize) -> bool {
        level.fill(usize::MAX);
        level[0] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(0);
        while let Some(u) = queue.pop_front() {
            for arc in &self.arcs[u] {
                if arc.cap > Self::FLOW_EPS && level[arc.to] == usize::MAX {
                    level[arc.to] = level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        level[sink] != usize::MAX
    }

    fn push(
        &mut self,
        node: usize,
        limit: f64,
        sink: usize,
        level: &[usize],
        next_arc: &mut [usize],
    ) -> f64 {
        if node == sink {
            return limit;
        }
        while next_arc[node] < self.arcs[node].len() {
            let idx = next_arc[node];
            let (to, cap, rev) = {
                let arc = &self.arcs[node][idx];
                (arc.to, arc.cap, arc.rev)
            };
            if cap > Self::FLOW_EPS && level[to] == level[node] + 1 {
                let pushed = self.push(to, limit.min(cap), sink, level, next_arc);
                if pushed > Self::FLOW_EPS {
                    self.arcs[node][idx].cap -= pushed;
                    self.arcs[to][rev].cap += pushed;
                    return pushed;
                }
            }
            next_arc[node] += 1;
        }
        0.0
    }
}
