//! Backtracking search for exponent matrices with girth 6 or 8.
//!
//! Only the cells of the base copy are assigned; the full matrix is the
//! row-shifted replication, and all feasibility tests run against the full
//! replication. Cells are visited heaviest first (multi-entry cells carry the
//! difference constraints; single-entry cells are nearly free), values
//! ascending within a cell, and the very first exponent is pinned to 0, which
//! is sound because a global shift of all exponents preserves every cycle.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tanner::tanner_girth;

use super::cycles::SumSet;
use super::{BaseMatrix, ExponentMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GirthTarget {
    Six,
    Eight,
}

impl GirthTarget {
    pub fn girth(self) -> usize {
        match self {
            GirthTarget::Six => 6,
            GirthTarget::Eight => 8,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchConfig {
    /// Abort with `SearchExhausted` after this many explored nodes.
    pub node_cap: Option<u64>,
    /// Partition the first free exponent's candidates across threads; the
    /// solution from the lowest candidate wins, so the result stays
    /// deterministic (explored-node totals do not).
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    /// Exponents actually assigned by the search (base copy only).
    pub assigned_entries: usize,
    /// Exponents of the full replicated matrix.
    pub total_entries: usize,
    pub explored_nodes: u64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub exponent: ExponentMatrix,
    pub stats: SearchStats,
}

pub fn search_exponent(
    w: &BaseMatrix,
    n_lift: usize,
    target: GirthTarget,
) -> Result<SearchOutcome> {
    search_exponent_with(w, n_lift, target, SearchConfig::default())
}

pub fn search_exponent_with(
    w: &BaseMatrix,
    n_lift: usize,
    target: GirthTarget,
    config: SearchConfig,
) -> Result<SearchOutcome> {
    if target == GirthTarget::Eight {
        for i in 0..w.n_rows() {
            for j in 0..w.n_cols() {
                if w.get(i, j) >= 3 {
                    return Err(Error::EntryCap {
                        row: i,
                        col: j,
                        value: w.get(i, j),
                        cap: 2,
                    });
                }
            }
        }
    }
    let problem = Problem::from_base(w, n_lift, target);
    let outcome = if config.parallel {
        problem.solve_parallel(config.node_cap)
    } else {
        problem.solve(config.node_cap)
    }?;
    // independent verification before handing the matrix out
    let girth = tanner_girth(&outcome.exponent.lift());
    assert!(
        girth.is_none_or(|g| g >= target.girth()),
        "search returned a matrix with lifted girth {girth:?} below target {}",
        target.girth()
    );
    Ok(outcome)
}

struct Problem {
    n: usize,
    m: usize,
    base_cols: usize,
    offsets: Vec<usize>,
    target: GirthTarget,
    /// assignment order: (row, col, weight) of base-copy cells
    cells: Vec<(usize, usize, u32)>,
    /// element order: (cell index, element index within cell)
    order: Vec<(usize, usize)>,
    /// per cell, the other cell indices sharing its base column
    mates: Vec<Vec<usize>>,
    total_entries: usize,
}

/// Incremental multiset counters over the full replicated matrix.
struct State {
    values: Vec<Vec<usize>>,
    d_row: Vec<u16>,
    d_col: Vec<u16>,
    delta: Vec<u16>,
    undo: Vec<Vec<u32>>,
    explored: u64,
}

impl Problem {
    fn from_base(w: &BaseMatrix, n_lift: usize, target: GirthTarget) -> Self {
        let (base_cols, offsets) = match &w.provenance {
            Some(p) => (p.base_cols, p.offsets.clone()),
            None => (w.n_cols(), vec![0]),
        };
        let m = w.n_rows();
        let mut cells: Vec<(usize, usize, u32)> = (0..m)
            .flat_map(|i| (0..base_cols).map(move |j| (i, j)))
            .filter(|&(i, j)| w.get(i, j) > 0)
            .map(|(i, j)| (i, j, w.get(i, j)))
            .collect();
        cells.sort_by_key(|&(i, j, wt)| (std::cmp::Reverse(wt), i, j));
        let order: Vec<(usize, usize)> = cells
            .iter()
            .enumerate()
            .flat_map(|(ci, &(_, _, wt))| (0..wt as usize).map(move |e| (ci, e)))
            .collect();
        let mates: Vec<Vec<usize>> = (0..cells.len())
            .map(|ci| {
                (0..cells.len())
                    .filter(|&cj| cj != ci && cells[cj].1 == cells[ci].1)
                    .collect()
            })
            .collect();
        Problem {
            n: n_lift,
            m,
            base_cols,
            offsets,
            target,
            cells,
            order,
            mates,
            total_entries: w.total_entries(),
        }
    }

    fn fresh_state(&self) -> State {
        State {
            values: vec![Vec::new(); self.cells.len()],
            d_row: vec![0; self.m * self.n],
            d_col: vec![0; self.base_cols * self.n],
            delta: vec![0; self.m * self.m * self.n],
            undo: Vec::new(),
            explored: 0,
        }
    }

    /// Adds value `v` to cell `ci`, updating the replicated difference
    /// multisets. Returns false on any repeated difference (or, for girth-8
    /// targets, a vanishing 6-walk); the placement stays applied either way.
    fn place(&self, st: &mut State, ci: usize, v: usize) -> bool {
        let (p, q, _) = self.cells[ci];
        let n = self.n;
        let m = self.m;
        let mut tape = Vec::new();
        let mut ok = true;
        for &u in &st.values[ci] {
            let d1 = (v + n - u) % n;
            for d in [d1, (n - d1) % n] {
                let idx = q * n + d;
                st.d_col[idx] += 1;
                tape.push(DCOL | idx as u32);
                ok &= st.d_col[idx] <= 1;
                for &a in &self.offsets {
                    let idx = ((p + a) % m) * n + d;
                    st.d_row[idx] += 1;
                    tape.push(DROW | idx as u32);
                    ok &= st.d_row[idx] <= 1;
                }
            }
        }
        for &ci2 in &self.mates[ci] {
            let p2 = self.cells[ci2].0;
            for &u2 in &st.values[ci2] {
                for &a in &self.offsets {
                    let r1 = (p + a) % m;
                    let r2 = (p2 + a) % m;
                    let (lo, hi, d) = if r1 < r2 {
                        (r1, r2, (v + n - u2) % n)
                    } else {
                        (r2, r1, (u2 + n - v) % n)
                    };
                    let idx = (lo * m + hi) * n + d;
                    st.delta[idx] += 1;
                    tape.push(DELTA | idx as u32);
                    ok &= st.delta[idx] <= 1;
                }
            }
        }
        st.values[ci].push(v);
        st.undo.push(tape);
        if ok && self.target == GirthTarget::Eight {
            ok = !self.six_walk_through_latest(st, ci);
        }
        ok
    }

    fn unplace(&self, st: &mut State, ci: usize) {
        st.values[ci].pop();
        for mark in st.undo.pop().expect("unbalanced undo") {
            let idx = (mark & IDX_MASK) as usize;
            match mark & KIND_MASK {
                DROW => st.d_row[idx] -= 1,
                DCOL => st.d_col[idx] -= 1,
                _ => st.delta[idx] -= 1,
            }
        }
    }

    fn dfs(
        &self,
        st: &mut State,
        pos: usize,
        fixed_second: Option<usize>,
        node_cap: Option<u64>,
        abort: Option<(&AtomicUsize, usize)>,
    ) -> Option<Vec<Vec<usize>>> {
        if pos == self.order.len() {
            return Some(st.values.clone());
        }
        if let Some((flag, my_idx)) = abort {
            if flag.load(Ordering::Relaxed) < my_idx {
                return None;
            }
        }
        let (ci, ei) = self.order[pos];
        let lo = if ei > 0 {
            st.values[ci].last().expect("ascending order") + 1
        } else {
            0
        };
        let (from, to) = if pos == 0 {
            (0, 1) // pinned
        } else if let (1, Some(s)) = (pos, fixed_second) {
            if s < lo {
                return None;
            }
            (s, s + 1)
        } else {
            (lo, self.n)
        };
        for v in from..to {
            st.explored += 1;
            if let Some(cap) = node_cap {
                if st.explored > cap {
                    return None;
                }
            }
            if self.place(st, ci, v) {
                if let Some(solution) = self.dfs(st, pos + 1, fixed_second, node_cap, abort) {
                    return Some(solution);
                }
            }
            self.unplace(st, ci);
        }
        None
    }

    fn outcome(&self, values: Vec<Vec<usize>>, explored: u64) -> SearchOutcome {
        let mut b1 = vec![vec![Vec::new(); self.base_cols]; self.m];
        for (ci, vals) in values.iter().enumerate() {
            let (p, q, _) = self.cells[ci];
            b1[p][q] = vals.clone();
        }
        let exponent = ExponentMatrix::replicate(self.n, &b1, &self.offsets)
            .expect("search assignments are valid cells");
        SearchOutcome {
            exponent,
            stats: SearchStats {
                assigned_entries: self.order.len(),
                total_entries: self.total_entries,
                explored_nodes: explored,
            },
        }
    }

    fn solve(&self, node_cap: Option<u64>) -> Result<SearchOutcome> {
        let mut st = self.fresh_state();
        match self.dfs(&mut st, 0, None, node_cap, None) {
            Some(values) => Ok(self.outcome(values, st.explored)),
            None => Err(Error::SearchExhausted {
                explored: st.explored,
            }),
        }
    }

    fn solve_parallel(&self, node_cap: Option<u64>) -> Result<SearchOutcome> {
        if self.order.len() < 2 {
            return self.solve(node_cap);
        }
        let found_at = AtomicUsize::new(usize::MAX);
        let solutions: Mutex<Vec<(usize, Vec<Vec<usize>>)>> = Mutex::new(Vec::new());
        let explored: u64 = (0..self.n)
            .into_par_iter()
            .map(|second| {
                if found_at.load(Ordering::Relaxed) < second {
                    return 0;
                }
                let mut st = self.fresh_state();
                if let Some(values) = self.dfs(
                    &mut st,
                    0,
                    Some(second),
                    node_cap,
                    Some((&found_at, second)),
                ) {
                    found_at.fetch_min(second, Ordering::Relaxed);
                    solutions.lock().unwrap().push((second, values));
                }
                st.explored
            })
            .sum();
        let mut solutions = solutions.into_inner().unwrap();
        solutions.sort_by_key(|(idx, _)| *idx);
        match solutions.into_iter().next() {
            Some((_, values)) => Ok(self.outcome(values, explored)),
            None => Err(Error::SearchExhausted { explored }),
        }
    }

    /// Checks for a vanishing alternating 6-walk through the value placed
    /// last, over all currently placed values of the full replication.
    /// Earlier placements passed the same check, so any new 6-cycle must run
    /// through the newest value.
    fn six_walk_through_latest(&self, st: &State, new_ci: usize) -> bool {
        let n = self.n;
        let m = self.m;
        let newest = *st.values[new_ci].last().expect("value just placed");
        let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (row, col, val)
        let mut starts = Vec::new();
        for (ci, vals) in st.values.iter().enumerate() {
            let (p, q, _) = self.cells[ci];
            for (s, &a) in self.offsets.iter().enumerate() {
                let r = (p + a) % m;
                let c = s * self.base_cols + q;
                for &v in vals {
                    if ci == new_ci && v == newest {
                        starts.push(edges.len());
                    }
                    edges.push((r, c, v));
                }
            }
        }
        let mut row_edges = vec![Vec::new(); m];
        let mut col_edges = vec![Vec::new(); self.base_cols * self.offsets.len()];
        for (e, &(r, c, _)) in edges.iter().enumerate() {
            row_edges[r].push(e);
            col_edges[c].push(e);
        }
        for start in starts {
            let mut layer: Vec<Option<SumSet>> = vec![None; edges.len()];
            layer[start] = Some(SumSet::singleton(n, edges[start].2));
            for t in 1..6 {
                let mut next: Vec<Option<SumSet>> = vec![None; edges.len()];
                let row_move = t % 2 == 1;
                for (e, sums) in layer.iter().enumerate() {
                    let Some(sums) = sums else { continue };
                    let neighbors = if row_move {
                        &row_edges[edges[e].0]
                    } else {
                        &col_edges[edges[e].1]
                    };
                    for &f in neighbors {
                        if f == e {
                            continue;
                        }
                        let shifted = if row_move {
                            sums.rotated(n - edges[f].2 % n)
                        } else {
                            sums.rotated(edges[f].2)
                        };
                        match &mut next[f] {
                            Some(existing) => existing.union_with(&shifted),
                            slot @ None => *slot = Some(shifted),
                        }
                    }
                }
                layer = next;
            }
            for (e, sums) in layer.iter().enumerate() {
                let Some(sums) = sums else { continue };
                if e != start && edges[e].1 == edges[start].1 && sums.contains(0) {
                    return true;
                }
            }
        }
        false
    }
}

const KIND_MASK: u32 = 0b11 << 30;
const IDX_MASK: u32 = !KIND_MASK;
const DROW: u32 = 0b00 << 30;
const DCOL: u32 = 0b01 << 30;
const DELTA: u32 = 0b10 << 30;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qc::{bound_girth6_tradebased, BaseMatrix, Provenance};

    fn tradebased_w1() -> BaseMatrix {
        // the 5x8 base copy with column sums 3, replicated five times
        let w1 = [
            [0, 1, 0, 0, 3, 0, 0, 0],
            [1, 0, 0, 0, 0, 0, 3, 0],
            [0, 0, 0, 3, 0, 0, 0, 3],
            [2, 0, 0, 0, 0, 3, 0, 0],
            [0, 2, 3, 0, 0, 0, 0, 0],
        ];
        let offsets: Vec<usize> = vec![0, 1, 2, 3, 4];
        let entries: Vec<Vec<u32>> = (0..5)
            .map(|i| {
                offsets
                    .iter()
                    .flat_map(|&a| w1[(i + 5 - a) % 5].iter().copied())
                    .collect()
            })
            .collect();
        BaseMatrix::from_entries(
            entries,
            Some(Provenance {
                base_cols: 8,
                offsets,
            }),
        )
        .unwrap()
    }

    #[test]
    fn single_cell_minimum_lifting_degree() {
        let w = BaseMatrix::from_entries(vec![vec![2]], None).unwrap();
        assert_eq!(bound_girth6_tradebased(&w).unwrap().n_lower, 2);
        // N = 1 cannot host two distinct shifts
        assert!(matches!(
            search_exponent(&w, 1, GirthTarget::Six),
            Err(Error::SearchExhausted { .. })
        ));
        // N = 2: 1 == -1 mod 2, the cell difference repeats
        assert!(matches!(
            search_exponent(&w, 2, GirthTarget::Six),
            Err(Error::SearchExhausted { .. })
        ));
        let got = search_exponent(&w, 3, GirthTarget::Six).unwrap();
        assert_eq!(got.exponent.cell(0, 0), &[0, 1]);
    }

    #[test]
    fn search_counts_base_entries_only() {
        let w = tradebased_w1();
        let problem = Problem::from_base(&w, 41, GirthTarget::Six);
        assert_eq!(problem.order.len(), 24);
        assert_eq!(problem.total_entries, 120);
    }

    #[test]
    fn girth8_search_on_small_single_edge_base() {
        let w = BaseMatrix::from_entries(vec![vec![1, 1, 1], vec![1, 1, 1]], None).unwrap();
        let got = search_exponent(&w, 15, GirthTarget::Eight).unwrap();
        assert!(crate::tanner::tanner_girth(&got.exponent.lift()).unwrap() >= 8);
    }

    #[test]
    fn girth8_rejects_weights_above_two() {
        let w = BaseMatrix::from_entries(vec![vec![3]], None).unwrap();
        assert!(matches!(
            search_exponent(&w, 31, GirthTarget::Eight),
            Err(Error::EntryCap { .. })
        ));
    }

    #[test]
    fn parallel_search_matches_sequential() {
        let w = BaseMatrix::from_entries(vec![vec![2, 2, 0], vec![0, 2, 2]], None).unwrap();
        let seq = search_exponent(&w, 17, GirthTarget::Six).unwrap();
        let par = search_exponent_with(
            &w,
            17,
            GirthTarget::Six,
            SearchConfig {
                node_cap: None,
                parallel: true,
            },
        )
        .unwrap();
        assert_eq!(seq.exponent, par.exponent);
    }

    #[test]
    fn node_cap_aborts_with_exhausted() {
        let w = tradebased_w1();
        match search_exponent_with(
            &w,
            41,
            GirthTarget::Six,
            SearchConfig {
                node_cap: Some(100),
                parallel: false,
            },
        ) {
            Err(Error::SearchExhausted { explored }) => assert!(explored >= 100),
            other => panic!("expected exhaustion, got {:?}", other.map(|o| o.stats)),
        }
    }
}
