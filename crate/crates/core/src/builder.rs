//! Construction of the pair-by-block matrix `A`, its pruned form `C` and the
//! oriented parity-check matrix `H`.
//!
//! Rows of `A` are all unordered pairs `(x, y)`, `x < y`, in lexicographic
//! order; columns are blocks in id order. `A[(x,y), b] = 1` iff `{x, y}` is
//! the intersection pair of a verified volume-2 trade involving block `b`.

use crate::design::Design;
use crate::error::{Error, Result};
use crate::matrix::{pair_label, SparseBinaryMatrix};
use crate::trades::Trade2;

/// Builds `A` from a design and its detected trades.
pub fn build_a(design: &Design, trades: &[Trade2]) -> SparseBinaryMatrix {
    let v = design.v;
    let pair_index = |x: usize, y: usize| {
        // row of pair (x, y), x < y, in lexicographic order
        x * v - x * (x + 1) / 2 + (y - x - 1)
    };
    let n_rows = v * (v - 1) / 2;
    let mut rows = vec![Vec::new(); n_rows];
    for t in trades {
        let (x, y) = t.pair;
        let r = pair_index(x, y);
        rows[r].push(t.block_a);
        rows[r].push(t.block_b);
    }
    let row_labels = (0..v)
        .flat_map(|x| (x + 1..v).map(move |y| pair_label(x, y)))
        .collect();
    let col_labels = design.blocks.iter().map(|b| b.label()).collect();
    SparseBinaryMatrix::new(
        n_rows,
        design.blocks.len(),
        rows,
        Some(row_labels),
        Some(col_labels),
    )
}

/// Removes all-zero rows and columns, keeping surviving labels in order.
pub fn prune_to_c(a: &SparseBinaryMatrix) -> Result<SparseBinaryMatrix> {
    if a.count_ones() == 0 {
        return Err(Error::NoTrades);
    }
    let col_w = a.col_weights();
    let mut col_map = vec![usize::MAX; a.n_cols()];
    let mut col_labels = Vec::new();
    for (c, &w) in col_w.iter().enumerate() {
        if w > 0 {
            col_map[c] = col_labels.len();
            col_labels.push(a.col_labels()[c].clone());
        }
    }
    let mut rows = Vec::new();
    let mut row_labels = Vec::new();
    for (r, row) in a.rows().enumerate() {
        if !row.is_empty() {
            rows.push(row.iter().map(|&c| col_map[c]).collect());
            row_labels.push(a.row_labels()[r].clone());
        }
    }
    Ok(SparseBinaryMatrix::new(
        rows.len(),
        col_labels.len(),
        rows,
        Some(row_labels),
        Some(col_labels),
    ))
}

/// Transposes `C` when it has more rows than columns; ties stay as given.
pub fn orient_to_h(c: SparseBinaryMatrix) -> SparseBinaryMatrix {
    if c.n_rows() > c.n_cols() {
        c.transpose()
    } else {
        c
    }
}

/// Convenience: trades, `A`, `C` and `H` for a design in one call.
pub fn parity_check_from_design(design: &Design) -> Result<DesignMatrices> {
    let trades = crate::trades::find_volume2_trades(design)?;
    let a = build_a(design, &trades);
    let c = prune_to_c(&a)?;
    let h = orient_to_h(c.clone());
    Ok(DesignMatrices { trades, a, c, h })
}

pub struct DesignMatrices {
    pub trades: Vec<Trade2>,
    pub a: SparseBinaryMatrix,
    pub c: SparseBinaryMatrix,
    pub h: SparseBinaryMatrix,
}
