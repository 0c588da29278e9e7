use std::fmt::Write as _;

use crate::codeword::BitVector;
use crate::rational::{format_rational, parse_rational};

use super::{CodeHeader, CodesError};

/// A `t x n` binary matrix stored column by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    header: CodeHeader,
    columns: Vec<BitVector>,
}

impl CodeMatrix {
    pub fn new(header: CodeHeader, columns: Vec<BitVector>) -> Result<Self, CodesError> {
        header.validate()?;
        if columns.len() != header.n {
            return Err(CodesError::Shape(format!(
                "header says n={} but {} columns were given",
                header.n,
                columns.len()
            )));
        }
        if let Some(col) = columns.iter().find(|c| c.len() != header.t) {
            return Err(CodesError::Shape(format!(
                "header says t={} but a column has length {}",
                header.t,
                col.len()
            )));
        }
        Ok(CodeMatrix { header, columns })
    }

    /// Hand-built matrix with a placeholder header (`seed=none`).
    pub fn from_columns(columns: Vec<BitVector>) -> Result<Self, CodesError> {
        let t = columns.first().map(BitVector::len).unwrap_or(0);
        CodeMatrix::new(CodeHeader::manual(columns.len(), t), columns)
    }

    /// Columns of length `t` with ones at the listed positions.
    pub fn from_support(t: usize, supports: &[&[usize]]) -> Result<Self, CodesError> {
        let columns = supports
            .iter()
            .map(|s| BitVector::from_ones(t, s))
            .collect::<Result<Vec<_>, _>>()?;
        CodeMatrix::from_columns(columns)
    }

    pub fn with_header(self, header: CodeHeader) -> Result<Self, CodesError> {
        CodeMatrix::new(header, self.columns)
    }

    pub fn header(&self) -> &CodeHeader {
        &self.header
    }

    pub fn n(&self) -> usize {
        self.header.n
    }

    pub fn t(&self) -> usize {
        self.header.t
    }

    pub fn column(&self, j: usize) -> &BitVector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[BitVector] {
        &self.columns
    }

    /// Serializes to the line-oriented `URSC 1` text format.
    pub fn to_text(&self) -> String {
        let h = &self.header;
        let mut out = String::with_capacity(64 + h.n * (h.t + 1));
        let seed = h.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        let _ = writeln!(out, "URSC 1");
        let _ = writeln!(
            out,
            "n={} t={} alpha={} eps={} c={} seed={}",
            h.n,
            h.t,
            format_rational(&h.alpha),
            format_rational(&h.eps),
            format_rational(&h.c),
            seed
        );
        for col in &self.columns {
            let _ = writeln!(out, "{col}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CodesError> {
        let mut lines = text.lines();
        let bad = |line: usize, msg: String| CodesError::Format { line, msg };
        match lines.next() {
            Some(l) if l.trim_end() == "URSC 1" => {}
            Some(l) => return Err(bad(1, format!("expected magic `URSC 1`, found {l:?}"))),
            None => return Err(bad(1, "empty input".into())),
        }
        let header_line = lines
            .next()
            .ok_or_else(|| bad(2, "missing header line".into()))?;
        let header = parse_header(header_line).map_err(|msg| bad(2, msg))?;
        let mut columns = Vec::with_capacity(header.n);
        for j in 0..header.n {
            let line_no = j + 3;
            let line = lines
                .next()
                .ok_or_else(|| bad(line_no, format!("expected {} columns, found {j}", header.n)))?
                .trim_end();
            if line.len() != header.t {
                return Err(bad(
                    line_no,
                    format!(
                        "column has {} characters, expected {}",
                        line.len(),
                        header.t
                    ),
                ));
            }
            let col: BitVector = line.parse().map_err(|e| bad(line_no, format!("{e}")))?;
            columns.push(col);
        }
        if let Some((i, extra)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
            return Err(bad(
                header.n + 3 + i,
                format!("unexpected trailing content {extra:?}"),
            ));
        }
        CodeMatrix::new(header, columns)
    }
}

fn parse_header(line: &str) -> Result<CodeHeader, String> {
    let mut fields = std::collections::BTreeMap::new();
    for token in line.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| format!("malformed header field {token:?}"))?;
        if fields.insert(key, value).is_some() {
            return Err(format!("duplicate header field {key:?}"));
        }
    }
    let take = |key: &str| {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| format!("missing header field {key:?}"))
    };
    let int = |key: &str| -> Result<usize, String> {
        take(key)?
            .parse()
            .map_err(|_| format!("header field {key} is not a nonnegative integer"))
    };
    let rat = |key: &str| parse_rational(take(key)?).map_err(|e| format!("{key}: {e}"));
    let seed = match take("seed")? {
        "none" => None,
        s => Some(s.parse().map_err(|_| format!("invalid seed {s:?}"))?),
    };
    if fields.len() != 6 {
        return Err("unknown header fields present".into());
    }
    let header = CodeHeader {
        n: int("n")?,
        t: int("t")?,
        alpha: rat("alpha")?,
        eps: rat("eps")?,
        c: rat("c")?,
        seed,
    };
    header.validate().map_err(|e| e.to_string())?;
    Ok(header)
}
