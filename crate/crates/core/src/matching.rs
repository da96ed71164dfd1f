//! Maximum-cardinality bipartite matching over a support mask.
//!
//! Two modes back the Monge sweep: `max_matching` (Hopcroft-Karp, from
//! scratch) and `extend_matching`, which repairs a maximum matching after a
//! single edge is admitted by searching one augmenting path through that
//! edge. Both agree in size on every input; the sweep uses the incremental
//! mode, the permutation check uses the from-scratch one.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::plan::Permutation;
use crate::problem::SupportMask;

/// A matching: partial injective assignment of rows to columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    row_to_col: Vec<Option<usize>>,
    col_to_row: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Matching {
            row_to_col: vec![None; rows],
            col_to_row: vec![None; cols],
        }
    }

    pub fn size(&self) -> usize {
        self.row_to_col.iter().filter(|c| c.is_some()).count()
    }

    pub fn row_partner(&self, row: usize) -> Option<usize> {
        self.row_to_col[row]
    }

    pub fn col_partner(&self, col: usize) -> Option<usize> {
        self.col_to_row[col]
    }

    /// Matched pairs in row order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.row_to_col
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|j| (i, j)))
            .collect()
    }

    /// A perfect matching on a square support is a permutation.
    pub fn to_permutation(&self) -> Option<Permutation> {
        if self.row_to_col.len() != self.col_to_row.len() {
            return None;
        }
        let map: Option<Vec<usize>> = self.row_to_col.iter().copied().collect();
        map.and_then(|m| Permutation::new(m).ok())
    }

    fn link(&mut self, row: usize, col: usize) {
        self.row_to_col[row] = Some(col);
        self.col_to_row[col] = Some(row);
    }

    #[cfg(debug_assertions)]
    fn is_consistent(&self, support: &SupportMask) -> bool {
        self.row_to_col.iter().enumerate().all(|(i, c)| match c {
            Some(j) => support.contains(i, *j) && self.col_to_row[*j] == Some(i),
            None => true,
        }) && self.col_to_row.iter().enumerate().all(|(j, r)| match r {
            Some(i) => self.row_to_col[*i] == Some(j),
            None => true,
        })
    }
}

/// Hopcroft-Karp maximum matching on the admitted edges.
pub fn max_matching(support: &SupportMask) -> Matching {
    let n = support.rows();
    let mut matching = Matching::empty(n, support.cols());
    let mut dist = vec![usize::MAX; n];

    loop {
        // BFS layers from the free rows.
        let mut queue = VecDeque::new();
        for (i, d) in dist.iter_mut().enumerate() {
            if matching.row_to_col[i].is_none() {
                *d = 0;
                queue.push_back(i);
            } else {
                *d = usize::MAX;
            }
        }
        let mut reaches_free_col = false;
        while let Some(i) = queue.pop_front() {
            for j in support.row_neighbors(i) {
                match matching.col_to_row[j] {
                    None => reaches_free_col = true,
                    Some(i2) => {
                        if dist[i2] == usize::MAX {
                            dist[i2] = dist[i] + 1;
                            queue.push_back(i2);
                        }
                    }
                }
            }
        }
        if !reaches_free_col {
            return matching;
        }
        // Vertex-disjoint augmentations along the layers.
        for i in 0..n {
            if matching.row_to_col[i].is_none() {
                layered_augment(support, &mut matching, &mut dist, i);
            }
        }
    }
}

fn layered_augment(
    support: &SupportMask,
    matching: &mut Matching,
    dist: &mut [usize],
    row: usize,
) -> bool {
    for j in support.row_neighbors(row) {
        match matching.col_to_row[j] {
            None => {
                matching.link(row, j);
                dist[row] = usize::MAX;
                return true;
            }
            Some(next) => {
                if dist[next] == dist[row] + 1 && layered_augment(support, matching, dist, next) {
                    matching.link(row, j);
                    dist[row] = usize::MAX;
                    return true;
                }
            }
        }
    }
    dist[row] = usize::MAX;
    false
}

/// Does the support contain a permutation? Present iff the admitted edges
/// have a perfect matching, i.e. iff the permanent of the 0/1 mask is
/// non-zero.
pub fn check_perm(support: &SupportMask) -> Result<Option<Permutation>> {
    if !support.is_square() {
        return Err(Error::NotSquare {
            rows: support.rows(),
            cols: support.cols(),
        });
    }
    let matching = max_matching(support);
    if matching.size() == support.rows() {
        Ok(matching.to_permutation())
    } else {
        Ok(None)
    }
}

/// Repair a maximum matching after `new_edge` was admitted.
///
/// Requires `current` to be maximum for the support without `new_edge`. Any
/// new augmenting path must then pass through `new_edge`, so one alternating
/// search towards each endpoint suffices: a path from a free row to the
/// edge's row, and a path from the edge's column to a free column. When the
/// matching cannot grow, `current` is returned unchanged.
pub fn extend_matching(
    support: &SupportMask,
    mut current: Matching,
    new_edge: (usize, usize),
) -> Matching {
    let (edge_row, edge_col) = new_edge;
    let n = support.rows();
    let limit = n.min(support.cols());
    if current.size() == limit || current.row_to_col[edge_row] == Some(edge_col) {
        return current;
    }

    // Alternating path reaching edge_row from some free row; pairs to rematch.
    let head = match path_to_row(support, &current, edge_row) {
        Some(pairs) => pairs,
        None => return current,
    };
    // Alternating path from edge_col to some free column; pairs to rematch.
    let tail = match path_from_col(support, &current, edge_col) {
        Some(pairs) => pairs,
        None => return current,
    };

    for (r, c) in head.into_iter().chain(tail) {
        current.link(r, c);
    }
    current.link(edge_row, edge_col);
    #[cfg(debug_assertions)]
    debug_assert!(current.is_consistent(support));
    current
}

/// BFS over alternating paths (unmatched row->col, matched col->row) from all
/// free rows to `target`. Returns the (row, col) rematch pairs of the path.
fn path_to_row(
    support: &SupportMask,
    matching: &Matching,
    target: usize,
) -> Option<Vec<(usize, usize)>> {
    if matching.row_to_col[target].is_none() {
        return Some(Vec::new());
    }
    let n = support.rows();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut queue = VecDeque::new();
    for (i, seen) in visited.iter_mut().enumerate() {
        if matching.row_to_col[i].is_none() {
            *seen = true;
            queue.push_back(i);
        }
    }
    'search: while let Some(r) = queue.pop_front() {
        for c in support.row_neighbors(r) {
            if matching.row_to_col[r] == Some(c) {
                continue;
            }
            if let Some(r2) = matching.col_to_row[c] {
                if !visited[r2] {
                    visited[r2] = true;
                    parent[r2] = Some((r, c));
                    if r2 == target {
                        break 'search;
                    }
                    queue.push_back(r2);
                }
            }
            // A free column here would mean an augmenting path existed
            // before the new edge, contradicting the precondition.
        }
    }
    if !visited[target] {
        return None;
    }
    let mut pairs = Vec::new();
    let mut at = target;
    while let Some((prev, via)) = parent[at] {
        pairs.push((prev, via));
        at = prev;
    }
    Some(pairs)
}

/// BFS over alternating paths (matched col->row, unmatched row->col) from
/// `start` to any free column. Returns the (row, col) rematch pairs.
fn path_from_col(
    support: &SupportMask,
    matching: &Matching,
    start: usize,
) -> Option<Vec<(usize, usize)>> {
    if matching.col_to_row[start].is_none() {
        return Some(Vec::new());
    }
    let m = support.cols();
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut visited = vec![false; m];
    let mut queue = VecDeque::new();
    visited[start] = true;
    queue.push_back(start);
    let mut free_col = None;
    'search: while let Some(c) = queue.pop_front() {
        let r = matching.col_to_row[c].expect("only matched columns are enqueued");
        for c2 in support.row_neighbors(r) {
            if c2 == c || visited[c2] {
                continue;
            }
            visited[c2] = true;
            parent[c2] = Some(c);
            if matching.col_to_row[c2].is_none() {
                free_col = Some(c2);
                break 'search;
            }
            queue.push_back(c2);
        }
    }
    let mut pairs = Vec::new();
    let mut at = free_col?;
    while let Some(prev) = parent[at] {
        let row = matching.col_to_row[prev].expect("interior path columns are matched");
        pairs.push((row, at));
        at = prev;
    }
    Some(pairs)
}
