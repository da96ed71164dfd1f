//! Exact integer maximum flow and the coupling feasibility test.
//!
//! A support plus marginals becomes a four-layer network: source -> rows
//! (capacity `D*a_i`), admitted row -> col arcs (a sentinel capacity larger
//! than the total supply, so it never binds), cols -> sink (capacity
//! `D*b_j`). A coupling with the prescribed marginals and support exists iff
//! the maximum flow saturates every source arc; the saturating flow divided
//! by `D` is such a coupling, exactly.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::plan::Coupling;
use crate::problem::{Marginals, SupportMask};

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    rev: usize,
}

/// Dinic-style blocking-flow network over the scaled integer marginals.
/// Support arcs may be added after flow has been pushed; `max_flow` then
/// continues from the current state, which is what the sweep solvers rely on.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    rows: usize,
    cols: usize,
    arcs: Vec<Vec<Arc>>,
    // (row, col, index of the forward arc in arcs[1 + row])
    support_arcs: Vec<(usize, usize, usize)>,
    supply: Vec<i64>,
    demand: Vec<i64>,
    sentinel: i64,
    target: i64,
    flow: i64,
}

impl FlowNetwork {
    pub fn new(supply: &[i64], demand: &[i64]) -> Self {
        let rows = supply.len();
        let cols = demand.len();
        let target: i64 = supply.iter().sum();
        let mut net = FlowNetwork {
            rows,
            cols,
            arcs: vec![Vec::new(); rows + cols + 2],
            support_arcs: Vec::new(),
            supply: supply.to_vec(),
            demand: demand.to_vec(),
            sentinel: target + 1,
            target,
            flow: 0,
        };
        for (i, &cap) in supply.iter().enumerate() {
            net.add_arc(net.source(), 1 + i, cap);
        }
        for (j, &cap) in demand.iter().enumerate() {
            net.add_arc(1 + rows + j, net.sink(), cap);
        }
        net
    }

    fn source(&self) -> usize {
        0
    }

    fn sink(&self) -> usize {
        self.rows + self.cols + 1
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let fwd = self.arcs[from].len();
        let bwd = self.arcs[to].len();
        self.arcs[from].push(Arc { to, cap, rev: bwd });
        self.arcs[to].push(Arc {
            to: from,
            cap: 0,
            rev: fwd,
        });
        fwd
    }

    /// Admit the edge (row, col), with capacity that can never bind.
    pub fn add_support_edge(&mut self, row: usize, col: usize) {
        let col_node = 1 + self.rows + col;
        let idx = self.add_arc(1 + row, col_node, self.sentinel);
        self.support_arcs.push((row, col, idx));
    }

    /// Push as much additional flow as the residual network allows and
    /// return the total flow routed so far.
    pub fn max_flow(&mut self) -> i64 {
        let node_count = self.arcs.len();
        let mut level = vec![usize::MAX; node_count];
        loop {
            if !self.bfs_levels(&mut level) {
                return self.flow;
            }
            let mut next_arc = vec![0usize; node_count];
            loop {
                let pushed = self.blocking_push(self.source(), i64::MAX, &level, &mut next_arc);
                if pushed == 0 {
                    break;
                }
                self.flow += pushed;
            }
        }
    }

    fn bfs_levels(&self, level: &mut [usize]) -> bool {
        level.fill(usize::MAX);
        level[self.source()] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(self.source());
        while let Some(u) = queue.pop_front() {
            for arc in &self.arcs[u] {
                if arc.cap > 0 && level[arc.to] == usize::MAX {
                    level[arc.to] = level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        level[self.sink()] != usize::MAX
    }

    fn blocking_push(
        &mut self,
        node: usize,
        limit: i64,
        level: &[usize],
        next_arc: &mut [usize],
    ) -> i64 {
        if node == self.sink() {
            return limit;
        }
        while next_arc[node] < self.arcs[node].len() {
            let idx = next_arc[node];
            let (to, cap, rev) = {
                let arc = &self.arcs[node][idx];
                (arc.to, arc.cap, arc.rev)
            };
            if cap > 0 && level[to] == level[node] + 1 {
                let pushed = self.blocking_push(to, limit.min(cap), level, next_arc);
                if pushed > 0 {
                    self.arcs[node][idx].cap -= pushed;
                    self.arcs[to][rev].cap += pushed;
                    return pushed;
                }
            }
            next_arc[node] += 1;
        }
        0
    }

    pub fn flow_value(&self) -> i64 {
        self.flow
    }

    /// Full supply routed?
    pub fn is_saturated(&self) -> bool {
        self.flow == self.target
    }

    pub fn total_supply(&self) -> i64 {
        self.target
    }

    /// Flow currently routed out of the source towards row `i`.
    pub fn source_arc_flow(&self, row: usize) -> i64 {
        self.supply[row] - self.arcs[self.source()][row].cap
    }

    /// Flow currently routed from column `j` into the sink.
    pub fn sink_arc_flow(&self, col: usize) -> i64 {
        // The col -> sink arc is the first one pushed onto each column node.
        self.demand[col] - self.arcs[1 + self.rows + col][0].cap
    }

    /// Per-support-arc flows in insertion order.
    pub fn support_flows(&self) -> Vec<(usize, usize, i64)> {
        self.support_arcs
            .iter()
            .map(|&(i, j, idx)| (i, j, self.sentinel - self.arcs[1 + i][idx].cap))
            .collect()
    }

    /// The routed flow as an exact coupling, dividing by the scale `D`.
    pub fn to_coupling(&self, scale: u64) -> Coupling {
        let scale = BigInt::from(scale);
        Coupling::new(
            self.support_flows()
                .into_iter()
                .filter(|&(_, _, f)| f > 0)
                .map(|(i, j, f)| (i, j, BigRational::new(BigInt::from(f), scale.clone())))
                .collect(),
        )
    }
}

/// Is there a coupling with the given marginals whose support lies inside
/// the admitted edges? Returns one (exact) if so.
pub fn check_coup(support: &SupportMask, marg: &Marginals) -> Option<Coupling> {
    assert_eq!(support.rows(), marg.source().len(), "support/marginal rows");
    assert_eq!(support.cols(), marg.target().len(), "support/marginal cols");
    let mut net = FlowNetwork::new(marg.scaled_source(), marg.scaled_target());
    for i in 0..support.rows() {
        for j in support.row_neighbors(i) {
            net.add_support_edge(i, j);
        }
    }
    net.max_flow();
    if net.is_saturated() {
        Some(net.to_coupling(marg.scale()))
    } else {
        None
    }
}
