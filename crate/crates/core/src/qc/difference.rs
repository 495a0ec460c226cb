//! Difference matrices `D` and `Delta` and the 4-cycle criterion.
//!
//! A multiple-edge QC-LDPC code is free of 4-cycles iff every row of `D`,
//! every column of `D` and every row of `Delta` is free of repeated values,
//! repeats inside a single cell included.

use std::collections::HashMap;

use super::ExponentMatrix;

/// Within-cell differences: cell `(i, j)` holds `(x - y) mod N` for every
/// ordered pair of distinct entries, listed pairwise `(v_q - v_p, v_p - v_q)`
/// over sorted positions `p < q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceD {
    pub cells: Vec<Vec<Vec<usize>>>,
}

/// Cross-row differences: row `(i, i')`, `i < i'`, column `j` holds
/// `x - x' mod N` for `x` in `B_ij`, `x'` in `B_i'j`, `x`-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceDelta {
    pub row_pairs: Vec<(usize, usize)>,
    pub cells: Vec<Vec<Vec<usize>>>,
}

pub fn difference_d(b: &ExponentMatrix) -> DifferenceD {
    let n = b.n_lift();
    let cells = b
        .rows()
        .map(|row| {
            row.iter()
                .map(|cell| {
                    let mut sorted = cell.clone();
                    sorted.sort_unstable();
                    let mut out = Vec::new();
                    for p in 0..sorted.len() {
                        for q in p + 1..sorted.len() {
                            out.push((sorted[q] + n - sorted[p]) % n);
                            out.push((sorted[p] + n - sorted[q]) % n);
                        }
                    }
                    out
                })
                .collect()
        })
        .collect();
    DifferenceD { cells }
}

pub fn difference_delta(b: &ExponentMatrix) -> DifferenceDelta {
    let n = b.n_lift();
    let m = b.n_rows();
    let mut row_pairs = Vec::new();
    let mut cells = Vec::new();
    for i in 0..m {
        for ip in i + 1..m {
            row_pairs.push((i, ip));
            cells.push(
                (0..b.n_cols())
                    .map(|j| {
                        let (top, bottom) = (b.cell(i, j), b.cell(ip, j));
                        if top.is_empty() || bottom.is_empty() {
                            return Vec::new();
                        }
                        let mut out = Vec::with_capacity(top.len() * bottom.len());
                        for &x in top {
                            for &xp in bottom {
                                out.push((x + n - xp) % n);
                            }
                        }
                        out
                    })
                    .collect(),
            );
        }
    }
    DifferenceDelta { row_pairs, cells }
}

/// Where a repeated difference was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Girth6Violation {
    /// Two equal values in row `row` of `D`, in cells `(row, col_a)` and
    /// `(row, col_b)` (possibly the same cell).
    DRow {
        row: usize,
        value: usize,
        col_a: usize,
        col_b: usize,
    },
    /// Two equal values in column `col` of `D`.
    DCol {
        col: usize,
        value: usize,
        row_a: usize,
        row_b: usize,
    },
    /// Two equal values in row `(rows.0, rows.1)` of `Delta`.
    DeltaRow {
        rows: (usize, usize),
        value: usize,
        col_a: usize,
        col_b: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Girth6Report {
    pub violations: Vec<Girth6Violation>,
}

impl Girth6Report {
    pub fn is_free_of_4_cycles(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the 4-cycle criterion on `D` rows, `D` columns and `Delta` rows.
pub fn check_girth6(b: &ExponentMatrix) -> Girth6Report {
    let d = difference_d(b);
    let delta = difference_delta(b);
    let mut violations = Vec::new();

    for (i, row) in d.cells.iter().enumerate() {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (j, cell) in row.iter().enumerate() {
            for &v in cell {
                if let Some(&first) = seen.get(&v) {
                    violations.push(Girth6Violation::DRow {
                        row: i,
                        value: v,
                        col_a: first,
                        col_b: j,
                    });
                } else {
                    seen.insert(v, j);
                }
            }
        }
    }
    for j in 0..b.n_cols() {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (i, row) in d.cells.iter().enumerate() {
            for &v in &row[j] {
                if let Some(&first) = seen.get(&v) {
                    violations.push(Girth6Violation::DCol {
                        col: j,
                        value: v,
                        row_a: first,
                        row_b: i,
                    });
                } else {
                    seen.insert(v, i);
                }
            }
        }
    }
    for (pair, row) in delta.row_pairs.iter().zip(&delta.cells) {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (j, cell) in row.iter().enumerate() {
            for &v in cell {
                if let Some(&first) = seen.get(&v) {
                    violations.push(Girth6Violation::DeltaRow {
                        rows: *pair,
                        value: v,
                        col_a: first,
                        col_b: j,
                    });
                } else {
                    seen.insert(v, j);
                }
            }
        }
    }
    Girth6Report { violations }
}

/// The set `Delta_{(i,i');(j,j')}`: differences between the two `Delta`
/// vectors of a 2x2 cell submatrix, each tagged with the four contributing
/// entry positions. `delta_count` counts unordered element pairs whose
/// provenance vectors agree in at least one coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaQuad {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub values: Vec<usize>,
    /// entry indices into `(B_ij, B_i'j, B_ij', B_i'j')` per value
    pub provenance: Vec<[usize; 4]>,
    pub delta_count: usize,
}

pub fn delta_quad(b: &ExponentMatrix, i: usize, ip: usize, j: usize, jp: usize) -> DeltaQuad {
    let n = b.n_lift();
    let (c1, c3, c2, c4) = (b.cell(i, j), b.cell(ip, j), b.cell(i, jp), b.cell(ip, jp));
    let mut values = Vec::new();
    let mut provenance = Vec::new();
    for (a1, &x1) in c1.iter().enumerate() {
        for (a3, &x3) in c3.iter().enumerate() {
            for (a2, &x2) in c2.iter().enumerate() {
                for (a4, &x4) in c4.iter().enumerate() {
                    // (x1 - x3) - (x2 - x4) mod N
                    values.push((x1 + n - x3 + n - x2 + x4) % n);
                    provenance.push([a1, a3, a2, a4]);
                }
            }
        }
    }
    let mut delta_count = 0;
    for a in 0..provenance.len() {
        for b2 in a + 1..provenance.len() {
            if provenance[a]
                .iter()
                .zip(&provenance[b2])
                .any(|(x, y)| x == y)
            {
                delta_count += 1;
            }
        }
    }
    DeltaQuad {
        rows: (i, ip),
        cols: (j, jp),
        values,
        provenance,
        delta_count,
    }
}
