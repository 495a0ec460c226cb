//! Volume-2 trade detection, the graph of trades, cyclical trades and the
//! defining-set lower bound.
//!
//! Two blocks sharing exactly two elements are trade candidates: swapping the
//! shared pair inside both blocks must reproduce the ordered-pair coverage of
//! the original pair of blocks. Only candidates passing that check become
//! edges of the trade graph.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::design::{sorted_intersection_size, Block, Design};
use crate::error::{Error, Result};

/// A volume-2 trade: two blocks exchanging the shared pair `{x, y}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Trade2 {
    pub block_a: usize,
    pub block_b: usize,
    pub pair: (usize, usize),
}

/// The graph of trades: one vertex per block, one edge per volume-2 trade.
#[derive(Debug, Clone)]
pub struct TradeGraph {
    pub n_vertices: usize,
    pub edges: Vec<Trade2>,
}

/// Checks whether `t2` trades with `t1`: equal ordered-pair coverage
/// multisets and disjoint as ordered blocks.
pub fn verify_trade(t1: &[Vec<usize>], t2: &[Vec<usize>]) -> Result<bool> {
    if t1.len() != t2.len() {
        return Err(Error::MismatchedTrade);
    }
    let len = t1.first().map(|b| b.len());
    if t1.iter().chain(t2.iter()).any(|b| Some(b.len()) != len) {
        return Err(Error::MismatchedTrade);
    }
    for a in t1 {
        if t2.contains(a) {
            return Ok(false);
        }
    }
    let mut coverage: HashMap<(usize, usize), isize> = HashMap::new();
    for b in t1 {
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                *coverage.entry((b[i], b[j])).or_default() += 1;
            }
        }
    }
    for b in t2 {
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                *coverage.entry((b[i], b[j])).or_default() -= 1;
            }
        }
    }
    Ok(coverage.values().all(|&c| c == 0))
}

fn swap_pair(block: &Block, x: usize, y: usize) -> Vec<usize> {
    block
        .elements
        .iter()
        .map(|&e| {
            if e == x {
                y
            } else if e == y {
                x
            } else {
                e
            }
        })
        .collect()
}

/// Detects all volume-2 trades of a super-simple design.
///
/// For every unordered block pair with a two-element intersection the swapped
/// candidate is formed and verified; the result is sorted by block ids.
pub fn find_volume2_trades(design: &Design) -> Result<Vec<Trade2>> {
    if let Some((i, j)) = crate::design::super_simple_witness(design) {
        return Err(Error::NotSuperSimple(i, j));
    }
    let sorted: Vec<Vec<usize>> = design
        .blocks
        .iter()
        .map(|b| {
            let mut s = b.elements.clone();
            s.sort_unstable();
            s
        })
        .collect();
    let blocks = &design.blocks;
    let mut trades: Vec<Trade2> = (0..blocks.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let sorted = &sorted;
            (a + 1..blocks.len()).filter_map(move |b| {
                if sorted_intersection_size(&sorted[a], &sorted[b]) != 2 {
                    return None;
                }
                let shared: Vec<usize> = sorted[a]
                    .iter()
                    .copied()
                    .filter(|e| sorted[b].binary_search(e).is_ok())
                    .collect();
                let (x, y) = (shared[0], shared[1]);
                let t1 = vec![blocks[a].elements.clone(), blocks[b].elements.clone()];
                let t2 = vec![swap_pair(&blocks[a], x, y), swap_pair(&blocks[b], x, y)];
                match verify_trade(&t1, &t2) {
                    Ok(true) => Some(Trade2 {
                        block_a: a,
                        block_b: b,
                        pair: (x, y),
                    }),
                    _ => None,
                }
            })
        })
        .collect();
    trades.sort_unstable();
    Ok(trades)
}

/// Builds the graph of trades; isolated vertices are kept.
pub fn build_trade_graph(design: &Design, trades: &[Trade2]) -> TradeGraph {
    TradeGraph {
        n_vertices: design.blocks.len(),
        edges: trades.to_vec(),
    }
}

impl TradeGraph {
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for t in &self.edges {
            adj[t.block_a].push(t.block_b);
            adj[t.block_b].push(t.block_a);
        }
        adj
    }

    /// Length of the shortest cycle, `None` for forests.
    ///
    /// Breadth-first search from every vertex; a non-tree edge seen at depths
    /// `d(u)`, `d(w)` closes a cycle of length `d(u) + d(w) + 1`.
    pub fn girth(&self) -> Option<usize> {
        let adj = self.adjacency();
        graph_girth(&adj)
    }

    /// Vertex degrees (number of trades each block participates in).
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_vertices];
        for t in &self.edges {
            d[t.block_a] += 1;
            d[t.block_b] += 1;
        }
        d
    }

    /// Size of a maximum matching: every matched edge is a pairwise-disjoint
    /// volume-2 trade, and a defining set must contain a block of each.
    pub fn defining_set_lower_bound(&self) -> usize {
        use petgraph::graph::UnGraph;
        let mut g = UnGraph::<(), ()>::new_undirected();
        let nodes: Vec<_> = (0..self.n_vertices).map(|_| g.add_node(())).collect();
        for t in &self.edges {
            g.add_edge(nodes[t.block_a], nodes[t.block_b], ());
        }
        petgraph::algo::matching::maximum_matching(&g)
            .edges()
            .count()
    }
}

/// Shortest cycle length of a simple undirected graph given as adjacency
/// lists, `None` when acyclic.
pub(crate) fn graph_girth(adj: &[Vec<usize>]) -> Option<usize> {
    let n = adj.len();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = Vec::with_capacity(n);
    for start in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[start] = 0;
        queue.clear();
        queue.push(start);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            if let Some(b) = best {
                // deeper levels cannot improve on the current best
                if 2 * dist[u] + 1 >= b {
                    break;
                }
            }
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push(w);
                } else if w != parent[u] {
                    let c = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| c < b) {
                        best = Some(c);
                    }
                }
            }
        }
    }
    best
}

/// Checks that the given blocks form a cyclical trade: every pair of
/// cyclically consecutive blocks is one of the detected volume-2 trades.
pub fn is_cyclical_trade(trades: &[Trade2], blocks: &[usize]) -> bool {
    if blocks.len() < 3 {
        return false;
    }
    let mut edge_set: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    for t in trades {
        edge_set.insert((t.block_a, t.block_b));
        edge_set.insert((t.block_b, t.block_a));
    }
    (0..blocks.len()).all(|i| {
        let a = blocks[i];
        let b = blocks[(i + 1) % blocks.len()];
        edge_set.contains(&(a, b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::Design;

    pub(crate) fn dgdd_2_4a() -> Design {
        Design::explicit(
            8,
            4,
            1,
            Some(vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]),
            vec![
                vec![3, 0, 5, 6],
                vec![7, 5, 0, 2],
                vec![5, 7, 1, 3],
                vec![6, 4, 3, 1],
                vec![4, 6, 2, 0],
                vec![1, 2, 6, 5],
                vec![2, 1, 7, 4],
                vec![0, 3, 4, 7],
            ],
        )
        .unwrap()
    }

    #[test]
    fn boldfaced_table_trade_verifies() {
        let t1 = vec![vec![3, 0, 5, 6], vec![7, 5, 0, 2]];
        let t2 = vec![vec![3, 5, 0, 6], vec![7, 0, 5, 2]];
        assert!(verify_trade(&t1, &t2).unwrap());
    }

    #[test]
    fn identical_collections_do_not_trade() {
        let t1 = vec![vec![3, 0, 5, 6], vec![7, 5, 0, 2]];
        assert!(!verify_trade(&t1, &t1.clone()).unwrap());
    }

    #[test]
    fn volume4_trade_verifies() {
        let t1 = vec![
            vec![3, 0, 5, 6],
            vec![7, 5, 0, 2],
            vec![4, 6, 2, 0],
            vec![1, 2, 6, 5],
        ];
        let t2 = vec![
            vec![3, 6, 5, 0],
            vec![7, 2, 0, 5],
            vec![4, 0, 2, 6],
            vec![1, 5, 6, 2],
        ];
        assert!(verify_trade(&t1, &t2).unwrap());
        // second printed volume-4 trade
        let t1 = vec![
            vec![4, 6, 2, 0],
            vec![6, 4, 3, 1],
            vec![5, 7, 1, 3],
            vec![7, 5, 0, 2],
        ];
        let t2 = vec![
            vec![6, 4, 0, 2],
            vec![4, 6, 1, 3],
            vec![7, 5, 3, 1],
            vec![5, 7, 2, 0],
        ];
        assert!(verify_trade(&t1, &t2).unwrap());
    }

    #[test]
    fn mismatched_sizes_error() {
        let t1 = vec![vec![0, 1, 2]];
        let t2 = vec![vec![0, 1, 2], vec![3, 4, 5]];
        assert!(verify_trade(&t1, &t2).is_err());
        let t3 = vec![vec![0, 1]];
        assert!(verify_trade(&t1, &t3).is_err());
    }

    #[test]
    fn dgdd_2_4a_has_twelve_trades() {
        let d = dgdd_2_4a();
        let trades = find_volume2_trades(&d).unwrap();
        assert_eq!(trades.len(), 12);
        let g = build_trade_graph(&d, &trades);
        assert_eq!(g.n_vertices, 8);
        assert_eq!(g.edges.len(), 12);
        assert!(g.degrees().iter().all(|&d| d == 3));
        assert_eq!(g.girth(), Some(4));
        assert_eq!(g.defining_set_lower_bound(), 4);
    }

    #[test]
    fn printed_cyclical_trades_are_cycles() {
        let d = dgdd_2_4a();
        let trades = find_volume2_trades(&d).unwrap();
        // CT4 = {(3,0,5,6),(7,5,0,2),(4,6,2,0),(1,2,6,5)} = ids 0,1,4,5
        assert!(is_cyclical_trade(&trades, &[0, 1, 4, 5]));
        // CT5 = {(3,0,5,6),(7,5,0,2),(5,7,1,3),(2,1,7,4),(1,2,6,5)}
        assert!(is_cyclical_trade(&trades, &[0, 1, 2, 6, 5]));
        // not a cyclical trade: consecutive blocks must share a trade
        assert!(!is_cyclical_trade(&trades, &[0, 1, 2, 3]));
    }

    #[test]
    fn disjoint_blocks_have_no_trades() {
        let d = Design::explicit(9, 3, 0, None, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let trades = find_volume2_trades(&d).unwrap();
        assert!(trades.is_empty());
        let g = build_trade_graph(&d, &trades);
        assert_eq!(g.girth(), None);
        assert_eq!(g.defining_set_lower_bound(), 0);
    }

    #[test]
    fn non_super_simple_design_is_rejected() {
        let d = Design::explicit(6, 4, 9, None, vec![vec![0, 1, 2, 3], vec![0, 1, 2, 4]]).unwrap();
        assert!(matches!(
            find_volume2_trades(&d),
            Err(Error::NotSuperSimple(0, 1))
        ));
    }

    #[test]
    fn trade_symmetry_and_verification_invariant() {
        // every emitted trade passes verify_trade and appears once
        let d = dgdd_2_4a();
        let trades = find_volume2_trades(&d).unwrap();
        let mut seen = std::collections::HashSet::new();
        for t in &trades {
            assert!(t.block_a < t.block_b);
            assert!(seen.insert((t.block_a, t.block_b)));
            let (x, y) = t.pair;
            let a = &d.blocks[t.block_a];
            let b = &d.blocks[t.block_b];
            let t1 = vec![a.elements.clone(), b.elements.clone()];
            let t2 = vec![swap_pair(a, x, y), swap_pair(b, x, y)];
            assert!(verify_trade(&t1, &t2).unwrap());
        }
    }

    #[test]
    fn five_cycle_matching_is_two() {
        // exhaustive oracle over all edge subsets of C5
        let edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let mut best = 0;
        for mask in 0u32..32 {
            let chosen: Vec<_> = edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            let mut used = [false; 5];
            if chosen.iter().all(|&(a, b)| {
                let ok = !used[a] && !used[b];
                used[a] = true;
                used[b] = true;
                ok
            }) {
                best = best.max(chosen.len());
            }
        }
        assert_eq!(best, 2);
        let g = TradeGraph {
            n_vertices: 5,
            edges: edges
                .iter()
                .map(|&(a, b)| Trade2 {
                    block_a: a,
                    block_b: b,
                    pair: (0, 1),
                })
                .collect(),
        };
        assert_eq!(g.defining_set_lower_bound(), 2);
        assert_eq!(g.girth(), Some(5));
    }

    #[test]
    fn triangle_girth_is_three() {
        let g = TradeGraph {
            n_vertices: 3,
            edges: vec![
                Trade2 {
                    block_a: 0,
                    block_b: 1,
                    pair: (0, 1),
                },
                Trade2 {
                    block_a: 1,
                    block_b: 2,
                    pair: (0, 1),
                },
                Trade2 {
                    block_a: 0,
                    block_b: 2,
                    pair: (0, 1),
                },
            ],
        };
        assert_eq!(g.girth(), Some(3));
    }
}
