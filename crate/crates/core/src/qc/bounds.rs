//! Lower bounds on the lifting degree for girth-6 and girth-8 targets.

use crate::error::{Error, Result};

use super::BaseMatrix;

fn choose2(w: u32) -> u64 {
    let w = w as u64;
    w * w.saturating_sub(1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Girth6Bound {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub n_lower: u64,
}

/// General girth-6 bound: `N >= max(2X, 2Y, Z)` where `X`/`Y` maximize the
/// within-row/within-column sums of `C(W_ij, 2)` and `Z` maximizes the row
/// pair products.
pub fn bound_girth6(w: &BaseMatrix) -> Girth6Bound {
    let x = w
        .rows()
        .map(|r| r.iter().map(|&e| choose2(e)).sum())
        .max()
        .unwrap_or(0);
    let y = (0..w.n_cols())
        .map(|j| (0..w.n_rows()).map(|i| choose2(w.get(i, j))).sum())
        .max()
        .unwrap_or(0);
    let z = row_pair_products(w)
        .into_iter()
        .map(|(_, _, z)| z)
        .max()
        .unwrap_or(0);
    Girth6Bound {
        x,
        y,
        z,
        n_lower: (2 * x).max(2 * y).max(z),
    }
}

fn row_pair_products(w: &BaseMatrix) -> Vec<(usize, usize, u64)> {
    let mut out = Vec::new();
    for i in 0..w.n_rows() {
        for ip in i + 1..w.n_rows() {
            let z = (0..w.n_cols())
                .map(|j| w.get(i, j) as u64 * w.get(ip, j) as u64)
                .sum();
            out.push((i, ip, z));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeBasedGirth6Bound {
    pub x: u64,
    pub y: u64,
    pub n_lower: u64,
}

/// Trade-based girth-6 bound `N >= max(2X, 2Y)`; requires a base matrix with
/// no 2x2 all-positive submatrix.
pub fn bound_girth6_tradebased(w: &BaseMatrix) -> Result<TradeBasedGirth6Bound> {
    if let Some((i, ip, j, jp)) = w.all_positive_2x2() {
        return Err(Error::NotTradeBased {
            row_a: i,
            row_b: ip,
            col_a: j,
            col_b: jp,
        });
    }
    let g = bound_girth6(w);
    Ok(TradeBasedGirth6Bound {
        x: g.x,
        y: g.y,
        n_lower: (2 * g.x).max(2 * g.y),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Girth8Bound {
    pub x: u64,
    pub y: u64,
    pub m: u64,
    pub z: u64,
    pub n_lower: u64,
}

/// Girth-8 bound `N >= max(2X', 2Y', M + Z')`. Sums are restricted to cells
/// with multiplicity above one; `M` over an empty column set reports zero.
/// `Z'` is the largest common-coordinate pair count over column pairs within
/// the `M`-attaining row pairs (all of them when the maximum ties), computed
/// combinatorially from the multiplicities.
pub fn bound_girth8(w: &BaseMatrix) -> Result<Girth8Bound> {
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
    let x = w
        .rows()
        .map(|r| r.iter().filter(|&&e| e > 1).map(|&e| e as u64).sum())
        .max()
        .unwrap_or(0);
    let y = (0..w.n_cols())
        .map(|j| {
            (0..w.n_rows())
                .map(|i| w.get(i, j))
                .filter(|&e| e > 1)
                .map(|e| e as u64)
                .sum()
        })
        .max()
        .unwrap_or(0);
    let mut m = 0u64;
    let mut argmax: Vec<(usize, usize)> = Vec::new();
    for i in 0..w.n_rows() {
        for ip in i + 1..w.n_rows() {
            let s: u64 = (0..w.n_cols())
                .filter(|&j| w.get(i, j) > 1 && w.get(ip, j) > 1)
                .map(|j| (w.get(i, j) + w.get(ip, j)) as u64)
                .sum();
            match s.cmp(&m) {
                std::cmp::Ordering::Greater => {
                    m = s;
                    argmax = vec![(i, ip)];
                }
                std::cmp::Ordering::Equal => argmax.push((i, ip)),
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut z = 0u64;
    for &(i, ip) in &argmax {
        for j in 0..w.n_cols() {
            for jp in j + 1..w.n_cols() {
                z = z.max(common_coordinate_pairs(
                    w.get(i, j),
                    w.get(ip, j),
                    w.get(i, jp),
                    w.get(ip, jp),
                ));
            }
        }
    }
    Ok(Girth8Bound {
        x,
        y,
        m,
        z,
        n_lower: (2 * x).max(2 * y).max(m + z),
    })
}

/// Common-coordinate pair count of the quad `(i, i'; j, j')` computed from
/// the base matrix alone: the count depends only on the four cell sizes.
pub fn quad_delta_count(w: &BaseMatrix, i: usize, ip: usize, j: usize, jp: usize) -> u64 {
    common_coordinate_pairs(w.get(i, j), w.get(ip, j), w.get(i, jp), w.get(ip, jp))
}

/// Number of unordered pairs of provenance vectors `(a, b, c, d)` over cell
/// sizes `(w1, w3, w2, w4)` sharing at least one coordinate: all pairs minus
/// the pairs differing in every coordinate.
fn common_coordinate_pairs(w1: u32, w3: u32, w2: u32, w4: u32) -> u64 {
    let sizes = [w1 as u64, w3 as u64, w2 as u64, w4 as u64];
    let total: u64 = sizes.iter().product();
    if total == 0 {
        return 0;
    }
    let all_pairs = total * (total - 1) / 2;
    let disjoint: u64 = sizes.iter().map(|&s| s * (s - 1)).product::<u64>() / 2;
    all_pairs - disjoint
}
