//! Existence of `2k`-cycles in the lifted Tanner graph, checked on the
//! exponent matrix.
//!
//! A `2k`-cycle exists iff some closed walk over nonzero cells, alternating
//! row moves and column moves and never reusing the edge it just arrived on,
//! has alternating exponent sum divisible by `N`. Edges are the individual
//! exponents; parallel edges within a cell are distinct. The walk is explored
//! with a per-start-edge reachability sweep over (edge, partial sum) states.

use super::ExponentMatrix;

#[derive(Debug, Clone, Copy)]
struct Edge {
    row: usize,
    col: usize,
    val: usize,
}

/// Cyclic bitset over residues modulo `n`: one bit per achievable sum.
#[derive(Clone, PartialEq)]
pub(super) struct SumSet {
    words: Vec<u64>,
    n: usize,
}

impl SumSet {
    pub(super) fn empty(n: usize) -> Self {
        SumSet {
            words: vec![0; n.div_ceil(64)],
            n,
        }
    }

    pub(super) fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(v % n);
        s
    }

    pub(super) fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub(super) fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub(super) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// All residues shifted by `by` modulo `n`.
    pub(super) fn rotated(&self, by: usize) -> Self {
        let mut out = Self::empty(self.n);
        for v in 0..self.n {
            if self.contains(v) {
                out.insert((v + by) % self.n);
            }
        }
        out
    }

    pub(super) fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}

/// True iff some closed alternating walk of length `2k` (`k >= 2`) has
/// vanishing alternating exponent sum.
///
/// The lifted Tanner graph has girth at least `2k0` iff this is false for
/// every `k < k0`; at the girth itself the walk is a genuine cycle.
pub fn cycle_exists(b: &ExponentMatrix, k: usize) -> bool {
    assert!(k >= 2, "cycles in a bipartite graph have length >= 4");
    let n = b.n_lift();
    let mut edges = Vec::new();
    for i in 0..b.n_rows() {
        for j in 0..b.n_cols() {
            for &val in b.cell(i, j) {
                edges.push(Edge {
                    row: i,
                    col: j,
                    val,
                });
            }
        }
    }
    let mut row_edges = vec![Vec::new(); b.n_rows()];
    let mut col_edges = vec![Vec::new(); b.n_cols()];
    for (e, edge) in edges.iter().enumerate() {
        row_edges[edge.row].push(e);
        col_edges[edge.col].push(e);
    }

    // Every cycle contains a minimum edge; start the walk there and forbid
    // smaller edges, so each candidate start is tried once.
    for start in 0..edges.len() {
        // layer t holds, per edge, the sums of walks of t edges ending there;
        // odd positions add the exponent, even positions subtract
        let mut layer: Vec<Option<SumSet>> = vec![None; edges.len()];
        layer[start] = Some(SumSet::singleton(n, edges[start].val));
        for t in 1..2 * k {
            let mut next: Vec<Option<SumSet>> = vec![None; edges.len()];
            let odd_position = t % 2 == 1; // t edges placed; next is #t+1
            for (e, sums) in layer.iter().enumerate() {
                let Some(sums) = sums else { continue };
                if sums.is_empty() {
                    continue;
                }
                let neighbors = if odd_position {
                    // moving within the row of edge e
                    &row_edges[edges[e].row]
                } else {
                    &col_edges[edges[e].col]
                };
                for &f in neighbors {
                    if f == e || f < start {
                        continue;
                    }
                    let shifted = if odd_position {
                        // next edge is subtracted
                        sums.rotated(n - edges[f].val % n)
                    } else {
                        sums.rotated(edges[f].val)
                    };
                    match &mut next[f] {
                        Some(existing) => existing.union_with(&shifted),
                        slot @ None => *slot = Some(shifted),
                    }
                }
            }
            layer = next;
        }
        // close the walk: last edge shares the start column, is not the
        // start edge, and the alternating sum vanishes
        for (e, sums) in layer.iter().enumerate() {
            let Some(sums) = sums else { continue };
            if e != start && edges[e].col == edges[start].col && sums.contains(0) {
                return true;
            }
        }
    }
    false
}
