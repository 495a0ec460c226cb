//! The alist sparse-matrix interchange format.
//!
//! Layout: first line `n_cols n_rows`, second line the maximum column and row
//! weights, then the column weight list, the row weight list, one line of
//! 1-based row indices per column and one line of 1-based column indices per
//! row. Zero padding up to the maximum weight is accepted on input and not
//! produced on output.

use crate::error::{Error, Result};
use crate::matrix::SparseBinaryMatrix;

pub fn write_alist(m: &SparseBinaryMatrix) -> String {
    let cols = m.columns();
    let col_w: Vec<usize> = cols.iter().map(|c| c.len()).collect();
    let row_w = m.row_weights();
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", m.n_cols(), m.n_rows()));
    out.push_str(&format!(
        "{} {}\n",
        col_w.iter().max().copied().unwrap_or(0),
        row_w.iter().max().copied().unwrap_or(0)
    ));
    let join = |v: &[usize]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&join(&col_w));
    out.push('\n');
    out.push_str(&join(&row_w));
    out.push('\n');
    for c in &cols {
        let line: Vec<usize> = c.iter().map(|&r| r + 1).collect();
        out.push_str(&join(&line));
        out.push('\n');
    }
    for r in m.rows() {
        let line: Vec<usize> = r.iter().map(|&c| c + 1).collect();
        out.push_str(&join(&line));
        out.push('\n');
    }
    out
}

pub fn parse_alist(text: &str) -> Result<SparseBinaryMatrix> {
    // lines are positional; an empty line is an empty index list
    let mut lines = text.lines().enumerate();
    let mut next_numbers = |expected: &str| -> Result<(usize, Vec<usize>)> {
        match lines.next() {
            Some((i, line)) => {
                let nums: std::result::Result<Vec<usize>, _> = line
                    .split_whitespace()
                    .map(|t| t.parse::<usize>())
                    .collect();
                match nums {
                    Ok(v) => Ok((i + 1, v)),
                    Err(_) => Err(Error::Alist {
                        line: i + 1,
                        msg: format!("expected {expected}, found {line:?}"),
                    }),
                }
            }
            None => Err(Error::Alist {
                line: text.lines().count(),
                msg: format!("unexpected end of file, expected {expected}"),
            }),
        }
    };

    let (line_no, dims) = next_numbers("matrix dimensions")?;
    if dims.len() != 2 {
        return Err(Error::Alist {
            line: line_no,
            msg: "first line must be `n_cols n_rows`".into(),
        });
    }
    let (n_cols, n_rows) = (dims[0], dims[1]);
    let (_, _max) = next_numbers("maximum weights")?;
    let (line_no, col_w) = next_numbers("column weights")?;
    if col_w.len() != n_cols {
        return Err(Error::Alist {
            line: line_no,
            msg: format!("expected {n_cols} column weights, found {}", col_w.len()),
        });
    }
    let (line_no, row_w) = next_numbers("row weights")?;
    if row_w.len() != n_rows {
        return Err(Error::Alist {
            line: line_no,
            msg: format!("expected {n_rows} row weights, found {}", row_w.len()),
        });
    }
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n_rows];
    for (c, &w) in col_w.iter().enumerate() {
        let (line_no, mut idx) = next_numbers("column index list")?;
        idx.retain(|&x| x != 0); // tolerate zero padding
        if idx.len() != w {
            return Err(Error::Alist {
                line: line_no,
                msg: format!("column {c} expects {w} indices, found {}", idx.len()),
            });
        }
        for &r1 in &idx {
            if r1 > n_rows {
                return Err(Error::Alist {
                    line: line_no,
                    msg: format!("row index {r1} out of range 1..={n_rows}"),
                });
            }
            rows[r1 - 1].push(c);
        }
    }
    // row index lists: validate against what the columns declared
    for (r, &w) in row_w.iter().enumerate() {
        let (line_no, mut idx) = next_numbers("row index list")?;
        idx.retain(|&x| x != 0);
        if idx.len() != w {
            return Err(Error::Alist {
                line: line_no,
                msg: format!("row {r} expects {w} indices, found {}", idx.len()),
            });
        }
        let mut declared: Vec<usize> = idx
            .iter()
            .map(|&c1| {
                if c1 == 0 || c1 > n_cols {
                    Err(Error::Alist {
                        line: line_no,
                        msg: format!("column index {c1} out of range 1..={n_cols}"),
                    })
                } else {
                    Ok(c1 - 1)
                }
            })
            .collect::<Result<_>>()?;
        declared.sort_unstable();
        rows[r].sort_unstable();
        if declared != rows[r] {
            return Err(Error::Alist {
                line: line_no,
                msg: format!("row {r} disagrees with the column index lists"),
            });
        }
    }
    Ok(SparseBinaryMatrix::new(n_rows, n_cols, rows, None, None))
}
