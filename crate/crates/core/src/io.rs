//! File formats: protograph JSON, plain-text matrices and alist.
//!
//! Protograph file:
//! ```json
//! { "name": "(3,6)-regular",
//!   "base": [[1,1,1,1,1,1], [1,1,1,1,1,1], [1,1,1,1,1,1]],
//!   "transmitted": [true, true, true, true, true, true] }
//! ```
//! `name` and `transmitted` are optional (default: file stem, all transmitted).
//!
//! Text matrix: `#` comment lines, then a `rows cols` header and `rows`
//! lines of `cols` non-negative integers separated by spaces.
//!
//! alist (binary matrices only), one record per line:
//! `ncols nrows`, `max_col_weight max_row_weight`, the column weights, the
//! row weights, then one line per column with its 1-based row indices and
//! one line per row with its 1-based column indices. Lists are not
//! zero-padded; zeros are ignored on input.

use crate::error::{Error, Result};
use crate::gf2::SparseBinMatrix;
use crate::matrix::IntMatrix;
use crate::protograph::Protograph;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProtographFile {
    #[serde(default)]
    name: Option<String>,
    base: Vec<Vec<u32>>,
    #[serde(default)]
    transmitted: Option<Vec<bool>>,
}

/// Parses a protograph document. Errors carry `line:column` positions.
pub fn parse_protograph(text: &str, default_name: &str) -> Result<Protograph> {
    let file: ProtographFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let width = file.base.first().map_or(0, Vec::len);
    if let Some(i) = file.base.iter().position(|r| r.len() != width) {
        return Err(Error::Parse(format!(
            "line {}: base row {} has {} entries, row 1 has {width}",
            row_line(text, i),
            i + 1,
            file.base[i].len()
        )));
    }
    let base = IntMatrix::from_rows(&file.base).ok_or_else(|| {
        Error::Parse(format!(
            "line {}: base must be a non-empty matrix",
            key_line(text, "base")
        ))
    })?;
    let name = file.name.unwrap_or_else(|| default_name.to_string());
    let transmitted = file.transmitted.unwrap_or_else(|| vec![true; base.cols()]);
    Protograph::new(name, base, transmitted).map_err(|e| match e {
        Error::InvalidProtograph(msg) => {
            Error::Parse(format!("line {}: {msg}", key_line(text, "base")))
        }
        other => other,
    })
}

pub fn read_protograph(path: &Path) -> Result<Protograph> {
    let text = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("protograph");
    parse_protograph(&text, stem).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn protograph_to_json(p: &Protograph) -> String {
    let file = ProtographFile {
        name: Some(p.name().to_string()),
        base: p.base().to_rows(),
        transmitted: Some(p.transmitted().to_vec()),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn key_line(text: &str, key: &str) -> usize {
    text.find(&format!("\"{key}\""))
        .map_or(1, |o| line_at(text, o))
}

/// Line of the opening bracket of base row `row` (0-based).
fn row_line(text: &str, row: usize) -> usize {
    let Some(start) = text.find("\"base\"") else {
        return 1;
    };
    let mut depth = 0;
    let mut seen = 0;
    for (i, ch) in text[start..].char_indices() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == row {
                        return line_at(text, start + i);
                    }
                    seen += 1;
                }
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    line_at(text, start)
}

pub fn write_text_matrix(m: &IntMatrix, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn parse_text_matrix(text: &str) -> Result<IntMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims = parse_numbers::<usize>(header, hl)?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse(format!("line {hl}: expected `rows cols`")));
    };
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {rows} matrix rows")))?;
        let row = parse_numbers::<u32>(l, ln)?;
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "line {ln}: expected {cols} entries, found {}",
                row.len()
            )));
        }
        data.push(row);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse(format!(
            "line {ln}: trailing content after {rows} rows"
        )));
    }
    IntMatrix::from_rows(&data).ok_or_else(|| Error::Parse("matrix must be non-empty".into()))
}

fn parse_numbers<T: std::str::FromStr>(line: &str, ln: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<T>().map_err(|_| {
                Error::Parse(format!("line {ln}: `{t}` is not a non-negative integer"))
            })
        })
        .collect()
}

pub fn write_alist(h: &SparseBinMatrix) -> String {
    let cols = h.columns();
    let col_w: Vec<usize> = cols.iter().map(Vec::len).collect();
    let row_w = h.row_weights();
    let join =
        |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.ncols(), h.nrows());
    let _ = writeln!(
        out,
        "{} {}",
        col_w.iter().copied().max().unwrap_or(0),
        row_w.iter().copied().max().unwrap_or(0)
    );
    let _ = writeln!(out, "{}", join(&mut col_w.iter().copied()));
    let _ = writeln!(out, "{}", join(&mut row_w.iter().copied()));
    for c in &cols {
        let _ = writeln!(out, "{}", join(&mut c.iter().map(|r| r + 1)));
    }
    for r in 0..h.nrows() {
        let _ = writeln!(out, "{}", join(&mut h.row(r).iter().map(|c| c + 1)));
    }
    out
}

/// Reads an alist file. The column lists are authoritative; the row lists
/// must agree with them.
pub fn parse_alist(text: &str) -> Result<SparseBinMatrix> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let mut it = lines.iter().copied();
    let mut next = |what: &str| {
        it.next()
            .ok_or_else(|| Error::Parse(format!("alist ended before {what}")))
    };
    let (l1, s) = next("the dimensions")?;
    let [ncols, nrows] = parse_numbers::<usize>(s, l1)?[..] else {
        return Err(Error::Parse(format!("line {l1}: expected `ncols nrows`")));
    };
    let (l2, s) = next("the maximum weights")?;
    if parse_numbers::<usize>(s, l2)?.len() != 2 {
        return Err(Error::Parse(format!(
            "line {l2}: expected two maximum weights"
        )));
    }
    let (l3, s) = next("the column weights")?;
    let col_w = parse_numbers::<usize>(s, l3)?;
    let (l4, s) = next("the row weights")?;
    let row_w = parse_numbers::<usize>(s, l4)?;
    if col_w.len() != ncols || row_w.len() != nrows {
        return Err(Error::Parse(format!(
            "lines {l3}-{l4}: weight lists do not match {ncols} x {nrows}"
        )));
    }
    let mut h = SparseBinMatrix::new(nrows, ncols);
    for (c, &w) in col_w.iter().enumerate() {
        let (ln, s) = next("the column lists")?;
        let idx: Vec<usize> = parse_numbers::<usize>(s, ln)?
            .into_iter()
            .filter(|&x| x != 0)
            .collect();
        if idx.len() != w {
            return Err(Error::Parse(format!(
                "line {ln}: column {} lists {} rows, weight is {w}",
                c + 1,
                idx.len()
            )));
        }
        for r in idx {
            if r > nrows || !h.insert(r - 1, c) {
                return Err(Error::Parse(format!(
                    "line {ln}: bad or repeated row index {r}"
                )));
            }
        }
    }
    for (r, &w) in row_w.iter().enumerate() {
        let (ln, s) = next("the row lists")?;
        let mut idx: Vec<usize> = parse_numbers::<usize>(s, ln)?
            .into_iter()
            .filter(|&x| x != 0)
            .map(|x| x - 1)
            .collect();
        idx.sort_unstable();
        if idx.len() != w || idx != h.row(r) {
            return Err(Error::Parse(format!(
                "line {ln}: row {} disagrees with the column lists",
                r + 1
            )));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn protograph_round_trip() {
        let p = Protograph::new(
            "x",
            IntMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 1]]).unwrap(),
            vec![true, false, true],
        )
        .unwrap();
        let back = parse_protograph(&protograph_to_json(&p), "y").unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn defaults_and_errors() {
        let p = parse_protograph(r#"{"base": [[1,1,1],[1,1,1]]}"#, "stem").unwrap();
        assert_eq!(p.name(), "stem");
        assert_eq!(p.m(), 3);
        let e = parse_protograph("{\n \"base\": [\n  [1,1,1],\n  [1,1]\n ]\n}", "s").unwrap_err();
        assert!(e.to_string().contains("line 4"), "{e}");
        let e = parse_protograph("{\n \"base\": [[1, -1]]\n}", "s").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_protograph(r#"{"base": [[0,0],[1,1]]}"#, "s").unwrap_err();
        assert!(matches!(e, Error::Parse(_)), "{e}");
        assert!(parse_protograph(r#"{"base": [[1,1]], "extra": 1}"#, "s").is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = IntMatrix::from_rows(&[vec![1, 0, 2], vec![3, 1, 1]]).unwrap();
        let s = write_text_matrix(&m, Some("demo"));
        assert!(s.starts_with("# demo\n2 3\n"));
        assert_eq!(parse_text_matrix(&s).unwrap(), m);
        assert!(parse_text_matrix("2 2\n1 1\n").is_err());
        assert!(parse_text_matrix("1 2\n1 x\n")
            .unwrap_err()
            .to_string()
            .contains("line 2"));
    }

    #[test]
    fn alist_round_trip() {
        let m =
            IntMatrix::from_rows(&[vec![1, 1, 0, 1], vec![0, 1, 1, 0], vec![1, 0, 1, 1]]).unwrap();
        let h = SparseBinMatrix::from_int(&m).unwrap();
        let s = write_alist(&h);
        assert_eq!(s.lines().next(), Some("4 3"));
        assert_eq!(s.lines().nth(4), Some("1 3"));
        let back = parse_alist(&s).unwrap();
        assert_eq!(back.to_int(), m);
        // zero padding is accepted
        let padded = s.replacen("\n1 3\n", "\n1 3 0\n", 1);
        assert_eq!(parse_alist(&padded).unwrap().to_int(), m);
    }
}
