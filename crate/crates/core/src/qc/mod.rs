//! Multiple-edge QC-LDPC construction: the copy matrix `P`, base matrices
//! `W`, exponent matrices `B`, difference matrices, lifting-degree bounds,
//! CPM lifting and the exponent search.

mod bounds;
mod cycles;
mod difference;
mod search;
mod text;

pub use bounds::{
    bound_girth6, bound_girth6_tradebased, bound_girth8, quad_delta_count, Girth6Bound,
    Girth8Bound, TradeBasedGirth6Bound,
};
pub use cycles::cycle_exists;
pub use difference::{
    check_girth6, delta_quad, difference_d, difference_delta, DeltaQuad, DifferenceD,
    DifferenceDelta, Girth6Report, Girth6Violation,
};
pub use search::{
    search_exponent, search_exponent_with, GirthTarget, SearchConfig, SearchOutcome, SearchStats,
};
pub use text::{
    parse_base_matrix, parse_exponent_matrix, write_base_matrix, write_exponent_matrix,
};

use crate::error::{Error, Result};
use crate::matrix::SparseBinaryMatrix;

/// Copy structure of a matrix built from row shifts of a single block:
/// block `s` holds the base rows cyclically shifted down by `offsets[s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub base_cols: usize,
    pub offsets: Vec<usize>,
}

/// `P = [C_1 | C_2 | .. | C_r]`, each copy a downward row shift of `C_1`.
#[derive(Debug, Clone)]
pub struct PMatrix {
    pub base: SparseBinaryMatrix,
    pub offsets: Vec<usize>,
}

impl PMatrix {
    pub fn copies(&self) -> usize {
        self.offsets.len()
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            base_cols: self.base.n_cols(),
            offsets: self.offsets.clone(),
        }
    }

    /// The concatenated binary matrix.
    pub fn matrix(&self) -> SparseBinaryMatrix {
        let m = self.base.n_rows();
        let n1 = self.base.n_cols();
        let rows: Vec<Vec<usize>> = (0..m)
            .map(|i| {
                let mut row = Vec::new();
                for (s, &a) in self.offsets.iter().enumerate() {
                    let src = (i + m - a % m) % m;
                    row.extend(self.base.row(src).iter().map(|&c| s * n1 + c));
                }
                row
            })
            .collect();
        let col_labels = (0..self.offsets.len())
            .flat_map(|s| {
                let base = &self.base;
                (0..n1).map(move |c| format!("{}+{}", base.col_labels()[c], self.offsets[s]))
            })
            .collect();
        SparseBinaryMatrix::new(
            m,
            n1 * self.offsets.len(),
            rows,
            Some(self.base.row_labels().to_vec()),
            Some(col_labels),
        )
    }
}

/// Pairwise row-intersection counts of a binary matrix.
fn share_table(c: &SparseBinaryMatrix) -> Vec<Vec<usize>> {
    let m = c.n_rows();
    let rows: Vec<&[usize]> = c.rows().collect();
    let mut t = vec![vec![0; m]; m];
    for r in 0..m {
        for s in r + 1..m {
            let n = crate::design::sorted_intersection_size(rows[r], rows[s]);
            t[r][s] = n;
            t[s][r] = n;
        }
    }
    t
}

/// Finds a 2x2 all-ones submatrix of `c`, if any.
pub fn four_cycle_witness(c: &SparseBinaryMatrix) -> Option<(usize, usize, usize, usize)> {
    let rows: Vec<&[usize]> = c.rows().collect();
    for r in 0..rows.len() {
        for s in r + 1..rows.len() {
            let mut shared = rows[r].iter().filter(|e| rows[s].binary_search(e).is_ok());
            if let (Some(&a), Some(&b)) = (shared.next(), shared.next()) {
                return Some((r, s, a, b));
            }
        }
    }
    None
}

/// Greedily extends `P = [C_1 | ..]` with distinct downward row shifts,
/// smallest feasible offset first, so that no pairwise concatenation
/// contains a 2x2 all-ones submatrix. Stops at `target_copies` or when no
/// offset is feasible; the achieved copy count is `offsets.len()`.
pub fn build_p(c: &SparseBinaryMatrix, target_copies: usize) -> Result<PMatrix> {
    if let Some(col) = c.col_weights().iter().position(|&w| w == 0) {
        return Err(Error::ZeroColumn(col));
    }
    if let Some((r, s, a, b)) = four_cycle_witness(c) {
        return Err(Error::NotTradeBased {
            row_a: r,
            row_b: s,
            col_a: a,
            col_b: b,
        });
    }
    let m = c.n_rows();
    let share = share_table(c);
    let mut offsets = vec![0usize];
    for a in 1..m {
        if offsets.len() >= target_copies.max(1) {
            break;
        }
        let clash = |x: usize, y: usize| -> bool {
            // does [C_x | C_y] contain a cross 2x2 all-ones?
            (0..m).any(|r| {
                (r + 1..m).any(|s| {
                    share[(r + m - x) % m][(s + m - x) % m] >= 1
                        && share[(r + m - y) % m][(s + m - y) % m] >= 1
                })
            })
        };
        if offsets.iter().all(|&b| !clash(a, b)) {
            offsets.push(a);
        }
    }
    offsets.truncate(target_copies.max(1));
    Ok(PMatrix {
        base: c.clone(),
        offsets,
    })
}

/// Builds `P` from explicit shift offsets, validating pairwise freedom from
/// 2x2 all-ones submatrices.
pub fn build_p_with_offsets(c: &SparseBinaryMatrix, offsets: &[usize]) -> Result<PMatrix> {
    if let Some((r, s, a, b)) = four_cycle_witness(c) {
        return Err(Error::NotTradeBased {
            row_a: r,
            row_b: s,
            col_a: a,
            col_b: b,
        });
    }
    let p = PMatrix {
        base: c.clone(),
        offsets: offsets.to_vec(),
    };
    if let Some((r, s, a, b)) = four_cycle_witness(&p.matrix()) {
        return Err(Error::NotTradeBased {
            row_a: r,
            row_b: s,
            col_a: a,
            col_b: b,
        });
    }
    Ok(p)
}

/// A base matrix `W` of non-negative integer edge multiplicities, with the
/// copy provenance when built from a `P` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseMatrix {
    entries: Vec<Vec<u32>>,
    pub provenance: Option<Provenance>,
}

impl BaseMatrix {
    pub fn from_entries(entries: Vec<Vec<u32>>, provenance: Option<Provenance>) -> Result<Self> {
        let n = entries.first().map_or(0, |r| r.len());
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDesign("ragged base matrix".into()));
        }
        let w = BaseMatrix {
            entries,
            provenance,
        };
        w.check_provenance()?;
        Ok(w)
    }

    fn check_provenance(&self) -> Result<()> {
        if let Some(p) = &self.provenance {
            let m = self.n_rows();
            if p.base_cols == 0
                || p.offsets.is_empty()
                || p.base_cols * p.offsets.len() != self.n_cols()
            {
                return Err(Error::InvalidDesign(
                    "provenance does not tile the base matrix".into(),
                ));
            }
            for (s, &a) in p.offsets.iter().enumerate() {
                for i in 0..m {
                    for j in 0..p.base_cols {
                        if self.entries[i][s * p.base_cols + j]
                            != self.entries[(i + m - a % m) % m][j]
                        {
                            return Err(Error::InvalidDesign(format!(
                                "copy {s} is not the base shifted down by {a}"
                            )));
                        }
                    }
                }
            }
            if p.offsets[0] != 0 {
                return Err(Error::InvalidDesign(
                    "first copy must carry offset 0".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.entries.len()
    }

    pub fn n_cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.entries.iter().map(|r| r.as_slice())
    }

    /// Total edge count (sum of all entries), the exponent count of any
    /// matching exponent matrix.
    pub fn total_entries(&self) -> usize {
        self.entries.iter().flatten().map(|&w| w as usize).sum()
    }

    /// Column sums.
    pub fn col_sums(&self) -> Vec<u32> {
        let mut s = vec![0; self.n_cols()];
        for row in &self.entries {
            for (j, &w) in row.iter().enumerate() {
                s[j] += w;
            }
        }
        s
    }

    /// Row sums.
    pub fn row_sums(&self) -> Vec<u32> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    /// A pair of rows sharing two positive columns, if one exists.
    pub fn all_positive_2x2(&self) -> Option<(usize, usize, usize, usize)> {
        let m = self.n_rows();
        for i in 0..m {
            for ip in i + 1..m {
                let mut first = None;
                for j in 0..self.n_cols() {
                    if self.entries[i][j] > 0 && self.entries[ip][j] > 0 {
                        match first {
                            None => first = Some(j),
                            Some(f) => return Some((i, ip, f, j)),
                        }
                    }
                }
            }
        }
        None
    }
}

/// Replaces the 1s of each copy of `P` with positive integers so every
/// column of `W` sums to `column_weight_target`. Within a column the parts
/// are assigned bottom-heavy (ascending down the rows); entries are capped
/// (entries of 3 or more force 6-cycles, so girth-8 targets use cap 2).
pub fn assign_weights(p: &PMatrix, column_weight_target: u32, cap: u32) -> Result<BaseMatrix> {
    let m = p.base.n_rows();
    let n1 = p.base.n_cols();
    let cols = p.base.columns();
    let mut base = vec![vec![0u32; n1]; m];
    for (j, col_rows) in cols.iter().enumerate() {
        let ones = col_rows.len();
        if ones == 0 {
            return Err(Error::WeightTarget {
                col: j,
                ones: 0,
                target: column_weight_target,
                cap,
            });
        }
        if (ones as u32) > column_weight_target || column_weight_target > cap * ones as u32 {
            return Err(Error::WeightTarget {
                col: j,
                ones,
                target: column_weight_target,
                cap,
            });
        }
        // bottom-heavy split: walk rows bottom-up, give each the most it can
        // take while leaving at least one unit per remaining row
        let mut remaining = column_weight_target;
        let mut parts = vec![0u32; ones];
        for idx in (0..ones).rev() {
            let above = idx as u32;
            let give = (remaining - above).min(cap);
            parts[idx] = give;
            remaining -= give;
        }
        for (idx, &r) in col_rows.iter().enumerate() {
            base[r][j] = parts[idx];
        }
    }
    let offsets = &p.offsets;
    let entries: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            offsets
                .iter()
                .flat_map(|&a| base[(i + m - a % m) % m].iter().copied())
                .collect()
        })
        .collect();
    BaseMatrix::from_entries(
        entries,
        Some(Provenance {
            base_cols: n1,
            offsets: offsets.clone(),
        }),
    )
}

/// An exponent matrix: each cell a set of distinct shifts in `[0, N)`,
/// of size given by the base matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    n_lift: usize,
    cells: Vec<Vec<Vec<usize>>>,
    pub provenance: Option<Provenance>,
}

impl ExponentMatrix {
    pub fn new(
        n_lift: usize,
        cells: Vec<Vec<Vec<usize>>>,
        provenance: Option<Provenance>,
    ) -> Result<Self> {
        let n = cells.first().map_or(0, |r| r.len());
        if cells.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDesign("ragged exponent matrix".into()));
        }
        for row in &cells {
            for cell in row {
                let mut sorted = cell.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != cell.len() {
                    return Err(Error::InvalidDesign(
                        "exponent cell has repeated shifts".into(),
                    ));
                }
                if cell.iter().any(|&b| b >= n_lift) {
                    return Err(Error::InvalidDesign(format!(
                        "exponent {} out of range for N = {}",
                        cell.iter().max().unwrap(),
                        n_lift
                    )));
                }
            }
        }
        let b = ExponentMatrix {
            n_lift,
            cells,
            provenance,
        };
        if let Some(p) = &b.provenance {
            let m = b.n_rows();
            if p.base_cols == 0
                || p.offsets.is_empty()
                || p.offsets[0] != 0
                || p.base_cols * p.offsets.len() != b.n_cols()
            {
                return Err(Error::InvalidDesign(
                    "provenance does not tile the exponent matrix".into(),
                ));
            }
            for (s, &a) in p.offsets.iter().enumerate() {
                for i in 0..m {
                    for j in 0..p.base_cols {
                        let mut copy = b.cells[i][s * p.base_cols + j].clone();
                        let mut base = b.cells[(i + m - a % m) % m][j].clone();
                        copy.sort_unstable();
                        base.sort_unstable();
                        if copy != base {
                            return Err(Error::InvalidDesign(format!(
                                "exponent copy {s} is not the base shifted down by {a}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(b)
    }

    /// Replicates a base-block exponent assignment across row-shifted copies.
    pub fn replicate(n_lift: usize, b1: &[Vec<Vec<usize>>], offsets: &[usize]) -> Result<Self> {
        let m = b1.len();
        let n1 = b1.first().map_or(0, |r| r.len());
        let cells: Vec<Vec<Vec<usize>>> = (0..m)
            .map(|i| {
                offsets
                    .iter()
                    .flat_map(|&a| b1[(i + m - a % m) % m].iter().cloned())
                    .collect()
            })
            .collect();
        Self::new(
            n_lift,
            cells,
            Some(Provenance {
                base_cols: n1,
                offsets: offsets.to_vec(),
            }),
        )
    }

    pub fn n_lift(&self) -> usize {
        self.n_lift
    }

    pub fn n_rows(&self) -> usize {
        self.cells.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cells.first().map_or(0, |r| r.len())
    }

    pub fn cell(&self, i: usize, j: usize) -> &[usize] {
        &self.cells[i][j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vec<Vec<usize>>> {
        self.cells.iter()
    }

    /// The base matrix of cell sizes.
    pub fn weights(&self) -> BaseMatrix {
        BaseMatrix {
            entries: self
                .cells
                .iter()
                .map(|r| r.iter().map(|c| c.len() as u32).collect())
                .collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Lifts every cell to a sum of `N x N` circulant permutation matrices;
    /// row `s` of `I^b` has its 1 at column `(b + s) mod N`.
    pub fn lift(&self) -> SparseBinaryMatrix {
        let n_lift = self.n_lift;
        let (m, n) = (self.n_rows(), self.n_cols());
        let mut rows = vec![Vec::new(); m * n_lift];
        for (i, row) in self.cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                for &b in cell {
                    for s in 0..n_lift {
                        rows[i * n_lift + s].push(j * n_lift + (b + s) % n_lift);
                    }
                }
            }
        }
        SparseBinaryMatrix::new(m * n_lift, n * n_lift, rows, None, None)
    }
}

/// Lifts an exponent matrix to its full parity-check matrix.
pub fn lift(b: &ExponentMatrix) -> SparseBinaryMatrix {
    b.lift()
}
