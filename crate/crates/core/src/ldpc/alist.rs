//! The alist sparse-matrix text format.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: 1-based row indices of each column>
//! <m lines: 1-based column indices of each row>
//! ```
//!
//! Index lists may be padded with zeros up to the maximum degree. Both the
//! column and the row lists are read, and they must describe the same matrix.

use std::fmt::Write as _;

use super::ParityCheck;
use crate::{Error, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next_numbers(&mut self, what: &str) -> Result<Vec<usize>> {
        for (i, raw) in self.inner.by_ref() {
            self.line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            return raw
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Alist {
                        line: self.line,
                        message: format!("bad integer {t:?} in {what}"),
                    })
                })
                .collect();
        }
        Err(Error::Alist {
            line: self.line + 1,
            message: format!("unexpected end of file reading {what}"),
        })
    }

    fn err(&self, message: String) -> Error {
        Error::Alist {
            line: self.line,
            message,
        }
    }
}

pub fn parse(text: &str) -> Result<ParityCheck> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };

    let dims = lines.next_numbers("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(lines.err("expected `n m`".into()));
    };
    let maxes = lines.next_numbers("maximum degrees")?;
    if maxes.len() != 2 {
        return Err(lines.err("expected `max_col_degree max_row_degree`".into()));
    }
    let col_deg = lines.next_numbers("column degrees")?;
    if col_deg.len() != n {
        return Err(lines.err(format!(
            "expected {n} column degrees, got {}",
            col_deg.len()
        )));
    }
    let row_deg = lines.next_numbers("row degrees")?;
    if row_deg.len() != m {
        return Err(lines.err(format!("expected {m} row degrees, got {}", row_deg.len())));
    }

    let mut from_cols = Vec::new();
    for (c, &deg) in col_deg.iter().enumerate() {
        let idx: Vec<usize> = lines
            .next_numbers("column list")?
            .into_iter()
            .filter(|&i| i != 0)
            .collect();
        if idx.len() != deg {
            return Err(lines.err(format!(
                "column {} lists {} entries, degree says {deg}",
                c + 1,
                idx.len()
            )));
        }
        for r in idx {
            if r > m {
                return Err(lines.err(format!("row index {r} exceeds m = {m}")));
            }
            from_cols.push((r - 1, c));
        }
    }

    let mut from_rows = Vec::new();
    for (r, &deg) in row_deg.iter().enumerate() {
        let idx: Vec<usize> = lines
            .next_numbers("row list")?
            .into_iter()
            .filter(|&i| i != 0)
            .collect();
        if idx.len() != deg {
            return Err(lines.err(format!(
                "row {} lists {} entries, degree says {deg}",
                r + 1,
                idx.len()
            )));
        }
        for c in idx {
            if c > n {
                return Err(lines.err(format!("column index {c} exceeds n = {n}")));
            }
            from_rows.push((r, c - 1));
        }
    }

    from_cols.sort_unstable();
    from_rows.sort_unstable();
    if from_cols != from_rows {
        return Err(lines.err("column and row lists describe different matrices".into()));
    }
    ParityCheck::from_entries(m, n, &from_rows)
}

pub fn to_string(h: &ParityCheck) -> String {
    let cols = h.columns();
    let rows: Vec<&[usize]> = (0..h.n_rows()).map(|r| h.row(r)).collect();
    let join =
        |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");

    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.n_cols(), h.n_rows());
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(&mut cols.iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(&mut rows.iter().map(|r| r.len())));
    for c in &cols {
        let _ = writeln!(out, "{}", join(&mut c.iter().map(|r| r + 1)));
    }
    for r in &rows {
        let _ = writeln!(out, "{}", join(&mut r.iter().map(|c| c + 1)));
    }
    out
}
