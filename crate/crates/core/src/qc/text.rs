//! Structured text format for base and exponent matrices.
//!
//! Base matrix:
//! ```text
//! base 5 40
//! offsets 0 1 2 3 4
//! 0 1 0 0 3 0 0 0 ...
//! ```
//!
//! Exponent matrix (`-` is the empty cell, entries comma separated):
//! ```text
//! exponent 5 40 41
//! offsets 0 1 2 3 4
//! - 0 - - 0,1,3 ...
//! ```
//!
//! The `offsets` line is optional copy provenance; when present the listed
//! matrix must tile into row-shifted copies of its first block.

use crate::error::{Error, Result};

use super::{BaseMatrix, ExponentMatrix, Provenance};

pub fn write_base_matrix(w: &BaseMatrix) -> String {
    let mut out = format!("base {} {}\n", w.n_rows(), w.n_cols());
    if let Some(p) = &w.provenance {
        out.push_str(&offsets_line(p));
    }
    for row in w.rows() {
        let line: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_exponent_matrix(b: &ExponentMatrix) -> String {
    let mut out = format!("exponent {} {} {}\n", b.n_rows(), b.n_cols(), b.n_lift());
    if let Some(p) = &b.provenance {
        out.push_str(&offsets_line(p));
    }
    for row in b.rows() {
        let line: Vec<String> = row
            .iter()
            .map(|cell| {
                if cell.is_empty() {
                    "-".to_string()
                } else {
                    cell.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                }
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn offsets_line(p: &Provenance) -> String {
    let mut line = String::from("offsets");
    for a in &p.offsets {
        line.push(' ');
        line.push_str(&a.to_string());
    }
    line.push('\n');
    line
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            iter: text.lines().enumerate(),
        }
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.iter.by_ref() {
            let t = line.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Some((i + 1, t));
            }
        }
        None
    }
}

/// header integers, optional offsets, and a possibly carried-over data line
type Header<'a> = (Vec<usize>, Option<Vec<usize>>, Option<(usize, &'a str)>);

fn parse_header<'a>(lines: &mut Lines<'a>, kind: &str, dims: usize) -> Result<Header<'a>> {
    let (line_no, header) = lines.next_content().ok_or(Error::MatrixText {
        line: 0,
        msg: "empty file".into(),
    })?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some(kind) {
        return Err(Error::MatrixText {
            line: line_no,
            msg: format!("expected `{kind} ..` header"),
        });
    }
    let head: Vec<usize> = toks
        .map(|t| {
            t.parse().map_err(|_| Error::MatrixText {
                line: line_no,
                msg: format!("bad integer {t:?}"),
            })
        })
        .collect::<Result<_>>()?;
    if head.len() != dims {
        return Err(Error::MatrixText {
            line: line_no,
            msg: format!("header needs {dims} integers"),
        });
    }
    // optional offsets line
    let peek = lines.next_content();
    if let Some((line_no, line)) = peek {
        if let Some(rest) = line.strip_prefix("offsets") {
            let offsets: Vec<usize> = rest
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::MatrixText {
                        line: line_no,
                        msg: format!("bad offset {t:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            return Ok((head, Some(offsets), None));
        }
        return Ok((head, None, Some((line_no, line))));
    }
    Ok((head, None, None))
}

pub fn parse_base_matrix(text: &str) -> Result<BaseMatrix> {
    let mut lines = Lines::new(text);
    let (head, offsets, carried) = parse_header(&mut lines, "base", 2)?;
    let (m, n) = (head[0], head[1]);
    let mut rows = Vec::with_capacity(m);
    let mut pending = carried;
    for _ in 0..m {
        let (line_no, line) = match pending.take() {
            Some(x) => x,
            None => lines.next_content().ok_or(Error::MatrixText {
                line: 0,
                msg: format!("expected {m} rows"),
            })?,
        };
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::MatrixText {
                    line: line_no,
                    msg: format!("bad entry {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::MatrixText {
                line: line_no,
                msg: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    let provenance = offsets.map(|offsets| Provenance {
        base_cols: if offsets.is_empty() {
            n
        } else {
            n / offsets.len()
        },
        offsets,
    });
    BaseMatrix::from_entries(rows, provenance).map_err(|e| Error::MatrixText {
        line: 0,
        msg: e.to_string(),
    })
}

pub fn parse_exponent_matrix(text: &str) -> Result<ExponentMatrix> {
    let mut lines = Lines::new(text);
    let (head, offsets, carried) = parse_header(&mut lines, "exponent", 3)?;
    let (m, n, n_lift) = (head[0], head[1], head[2]);
    let mut rows = Vec::with_capacity(m);
    let mut pending = carried;
    for _ in 0..m {
        let (line_no, line) = match pending.take() {
            Some(x) => x,
            None => lines.next_content().ok_or(Error::MatrixText {
                line: 0,
                msg: format!("expected {m} rows"),
            })?,
        };
        let row: Vec<Vec<usize>> = line
            .split_whitespace()
            .map(|tok| {
                if tok == "-" {
                    Ok(Vec::new())
                } else {
                    tok.split(',')
                        .map(|t| {
                            t.parse().map_err(|_| Error::MatrixText {
                                line: line_no,
                                msg: format!("bad exponent {t:?}"),
                            })
                        })
                        .collect()
                }
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::MatrixText {
                line: line_no,
                msg: format!("expected {n} cells, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    let provenance = offsets.map(|offsets| Provenance {
        base_cols: if offsets.is_empty() {
            n
        } else {
            n / offsets.len()
        },
        offsets,
    });
    ExponentMatrix::new(n_lift, rows, provenance).map_err(|e| Error::MatrixText {
        line: 0,
        msg: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qc::{BaseMatrix, ExponentMatrix};

    #[test]
    fn base_round_trip() {
        let w = BaseMatrix::from_entries(vec![vec![2, 1, 2, 0], vec![2, 2, 3, 1]], None).unwrap();
        let text = write_base_matrix(&w);
        let back = parse_base_matrix(&text).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn exponent_round_trip_with_empty_cells() {
        let b = ExponentMatrix::new(
            41,
            vec![vec![vec![], vec![0]], vec![vec![0, 1, 3], vec![]]],
            None,
        )
        .unwrap();
        let text = write_exponent_matrix(&b);
        assert!(text.contains('-'));
        let back = parse_exponent_matrix(&text).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn bad_cell_reports_line() {
        let text = "exponent 1 2 7\n0,x -\n";
        match parse_exponent_matrix(text) {
            Err(Error::MatrixText { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn offsets_must_tile() {
        // 1x3 with two offsets cannot tile
        let text = "base 1 3\noffsets 0 1\n1 1 1\n";
        assert!(parse_base_matrix(text).is_err());
    }
}
