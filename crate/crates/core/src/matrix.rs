//! Labeled sparse binary matrices.
//!
//! One representation serves the whole pipeline: the pair-by-block matrix `A`,
//! its pruned form `C`, oriented parity-check matrices `H`, lifted QC matrices
//! and assembled SC matrices. Rows are stored as sorted column-index lists and
//! every row/column carries a textual label so constructions can be permuted
//! into a reference layout and compared bit for bit.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<usize>>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

/// Canonical label for an unordered element pair, smaller element first.
pub fn pair_label(x: usize, y: usize) -> String {
    let (a, b) = if x <= y { (x, y) } else { (y, x) };
    format!("{a},{b}")
}

/// Canonical label for a block: its elements in order, comma separated.
pub fn block_label(elements: &[usize]) -> String {
    elements
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl SparseBinaryMatrix {
    /// Builds a matrix from per-row column indices. Indices are sorted and
    /// deduplicated; labels default to `r{i}` / `c{j}` when not provided.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        mut rows: Vec<Vec<usize>>,
        row_labels: Option<Vec<String>>,
        col_labels: Option<Vec<String>>,
    ) -> Self {
        assert_eq!(rows.len(), n_rows, "row count mismatch");
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
            if let Some(&c) = r.last() {
                assert!(c < n_cols, "column index out of bounds");
            }
        }
        let row_labels =
            row_labels.unwrap_or_else(|| (0..n_rows).map(|i| format!("r{i}")).collect());
        let col_labels =
            col_labels.unwrap_or_else(|| (0..n_cols).map(|j| format!("c{j}")).collect());
        assert_eq!(row_labels.len(), n_rows);
        assert_eq!(col_labels.len(), n_cols);
        Self {
            n_rows,
            n_cols,
            rows,
            row_labels,
            col_labels,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Column-major adjacency: for each column the sorted row indices.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.n_cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    pub fn transpose(&self) -> Self {
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows: self.columns(),
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.len()).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.n_cols];
        for row in &self.rows {
            for &c in row {
                w[c] += 1;
            }
        }
        w
    }

    /// Reorders rows and columns to match the given label sequences.
    /// Used to compare a canonical construction against a reference layout.
    pub fn permute_to(&self, row_labels: &[String], col_labels: &[String]) -> Result<Self> {
        if row_labels.len() != self.n_rows || col_labels.len() != self.n_cols {
            return Err(Error::UnknownLabel(format!(
                "label permutation has {}x{} labels for a {}x{} matrix",
                row_labels.len(),
                col_labels.len(),
                self.n_rows,
                self.n_cols
            )));
        }
        let find = |labels: &[String], want: &String| {
            labels
                .iter()
                .position(|l| l == want)
                .ok_or_else(|| Error::UnknownLabel(want.clone()))
        };
        let row_perm: Vec<usize> = row_labels
            .iter()
            .map(|l| find(&self.row_labels, l))
            .collect::<Result<_>>()?;
        let col_perm: Vec<usize> = col_labels
            .iter()
            .map(|l| find(&self.col_labels, l))
            .collect::<Result<_>>()?;
        let mut col_inv = vec![usize::MAX; self.n_cols];
        for (new, &old) in col_perm.iter().enumerate() {
            if col_inv[old] != usize::MAX {
                return Err(Error::UnknownLabel(format!(
                    "duplicate column label {:?}",
                    col_labels[new]
                )));
            }
            col_inv[old] = new;
        }
        let mut seen_rows = vec![false; self.n_rows];
        let rows = row_perm
            .iter()
            .map(|&old| {
                if std::mem::replace(&mut seen_rows[old], true) {
                    return Err(Error::UnknownLabel(format!(
                        "duplicate row label {:?}",
                        self.row_labels[old]
                    )));
                }
                let mut r: Vec<usize> = self.rows[old].iter().map(|&c| col_inv[c]).collect();
                r.sort_unstable();
                Ok(r)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows,
            row_labels: row_labels.to_vec(),
            col_labels: col_labels.to_vec(),
        })
    }

    /// Human-readable dump: `1` and `.` entries with row/column labels.
    pub fn dump(&self) -> String {
        let width = self
            .col_labels
            .iter()
            .map(|l| l.len())
            .max()
            .unwrap_or(1)
            .max(1);
        let mut out = String::new();
        out.push_str(&" ".repeat(width + 1));
        for l in &self.col_labels {
            out.push_str(&format!("{l:>width$} "));
        }
        out.push('\n');
        for (r, row) in self.rows.iter().enumerate() {
            out.push_str(&" ".repeat(width + 1));
            let mut it = row.iter().peekable();
            for c in 0..self.n_cols {
                let ch = if it.peek() == Some(&&c) {
                    it.next();
                    "1"
                } else {
                    "."
                };
                out.push_str(&format!("{ch:>width$} "));
            }
            out.push_str(&self.row_labels[r]);
            out.push('\n');
        }
        out
    }
}

/// Row and column weight multisets with a regularity classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub row_weights: Vec<usize>,
    pub col_weights: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    /// `(c, r)`-regular: every column has weight `c`, every row weight `r`.
    Regular {
        column: usize,
        row: usize,
    },
    Irregular,
}

impl WeightProfile {
    pub fn classify(&self) -> Regularity {
        let rw: Option<usize> = match self.row_weights.split_first() {
            Some((&w, rest)) if rest.iter().all(|&x| x == w) => Some(w),
            _ => None,
        };
        let cw: Option<usize> = match self.col_weights.split_first() {
            Some((&w, rest)) if rest.iter().all(|&x| x == w) => Some(w),
            _ => None,
        };
        match (cw, rw) {
            (Some(c), Some(r)) => Regularity::Regular { column: c, row: r },
            _ => Regularity::Irregular,
        }
    }
}

/// Exact weight multisets of a parity-check matrix.
pub fn weight_profile(h: &SparseBinaryMatrix) -> WeightProfile {
    WeightProfile {
        row_weights: h.row_weights(),
        col_weights: h.col_weights(),
    }
}
