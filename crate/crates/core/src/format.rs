//! Text and JSON file formats for residue arrays.
//!
//! Text: a header line
//!
//! ```text
//! kind=DCA k=4 n=6 h=0 form=full
//! ```
//!
//! (DM headers add `lambda=<λ>`), then one row per line as space-separated
//! decimals. `#` starts a comment that runs to the end of the line.
//!
//! JSON: an object with the same header fields plus `entries`, an array of
//! rows. Writers may add a `method` field naming the construction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::{ArrayError, ArrayKind, Form, ResidueArray};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid array: {0}")]
    Array(#[from] ArrayError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

/// JSON document form of an array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayDoc {
    pub kind: ArrayKind,
    pub k: usize,
    pub n: u32,
    pub h: u32,
    pub form: Form,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub entries: Vec<Vec<u32>>,
}

impl ArrayDoc {
    pub fn from_array(a: &ResidueArray, method: Option<String>) -> Self {
        Self {
            kind: a.kind(),
            k: a.k(),
            n: a.order(),
            h: a.hole(),
            form: a.form(),
            lambda: (a.kind() == ArrayKind::Dm).then(|| a.lambda().unwrap_or(1)),
            method,
            entries: (0..a.rows()).map(|i| a.row(i).to_vec()).collect(),
        }
    }

    pub fn into_array(self) -> Result<ResidueArray, FormatError> {
        let width = match self.form {
            Form::Full => self.k,
            Form::Reduced => self.k.saturating_sub(1),
        };
        if let Some(i) = self.entries.iter().position(|r| r.len() != width) {
            return Err(parse_err(
                0,
                format!("row {i} has {} entries, expected {width}", self.entries[i].len()),
            ));
        }
        let rows = self.entries.len();
        let a = ResidueArray::new(
            self.kind,
            self.form,
            self.n,
            self.h,
            self.k,
            self.entries.into_iter().flatten().collect(),
        )?;
        check_lambda(&a, self.lambda, rows, 0)?;
        Ok(a)
    }
}

fn check_lambda(
    a: &ResidueArray,
    lambda: Option<usize>,
    rows: usize,
    line: usize,
) -> Result<(), FormatError> {
    match (a.kind(), lambda) {
        (ArrayKind::Dm, Some(l)) if l * a.order() as usize != rows => Err(parse_err(
            line,
            format!("lambda={l} over n={} needs {} rows, got {rows}", a.order(), l * a.order() as usize),
        )),
        (ArrayKind::Dm, None) => Err(parse_err(line, "DM header needs lambda=")),
        (ArrayKind::Hdm | ArrayKind::Dca, Some(_)) => {
            Err(parse_err(line, "lambda= is only valid for DM arrays"))
        }
        _ => Ok(()),
    }
}

pub fn header_line(a: &ResidueArray) -> String {
    let mut s = format!(
        "kind={} k={} n={} h={} form={}",
        a.kind(),
        a.k(),
        a.order(),
        a.hole(),
        a.form()
    );
    if a.kind() == ArrayKind::Dm {
        s.push_str(&format!(" lambda={}", a.lambda().unwrap_or(1)));
    }
    s
}

pub fn write_rows(out: &mut String, rows: impl Iterator<Item = impl AsRef<[u32]>>) {
    for row in rows {
        let mut first = true;
        for v in row.as_ref() {
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
}

/// Text serialization.
pub fn write_array(a: &ResidueArray) -> String {
    let mut out = header_line(a);
    out.push('\n');
    write_rows(&mut out, (0..a.rows()).map(|i| a.row(i)));
    out
}

pub fn write_array_json(a: &ResidueArray, method: Option<String>) -> String {
    serde_json::to_string(&ArrayDoc::from_array(a, method)).expect("array documents always serialize")
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Splits `key=value` tokens of a header line.
pub(crate) fn header_fields(line_no: usize, line: &str) -> Result<Vec<(&str, &str)>, FormatError> {
    line.split_whitespace()
        .map(|tok| {
            tok.split_once('=')
                .ok_or_else(|| parse_err(line_no, format!("header token `{tok}` is not key=value")))
        })
        .collect()
}

pub(crate) fn parse_row(line_no: usize, line: &str, width: usize) -> Result<Vec<u32>, FormatError> {
    let row: Vec<u32> = line
        .split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| parse_err(line_no, format!("`{t}` is not a non-negative integer")))
        })
        .collect::<Result<_, _>>()?;
    if row.len() != width {
        return Err(parse_err(
            line_no,
            format!("row has {} entries, expected {width}", row.len()),
        ));
    }
    Ok(row)
}

/// Parses the text format.
pub fn read_array(text: &str) -> Result<ResidueArray, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let mut kind = None;
    let mut k = None;
    let mut n = None;
    let mut h = None;
    let mut form = None;
    let mut lambda = None;
    for (key, value) in header_fields(hl, header)? {
        let num = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| parse_err(hl, format!("`{key}={v}` is not a number")))
        };
        match key {
            "kind" => {
                kind = Some(match value {
                    "DM" => ArrayKind::Dm,
                    "HDM" => ArrayKind::Hdm,
                    "DCA" => ArrayKind::Dca,
                    other => return Err(parse_err(hl, format!("unknown kind `{other}`"))),
                })
            }
            "form" => {
                form = Some(match value {
                    "full" => Form::Full,
                    "reduced" => Form::Reduced,
                    other => return Err(parse_err(hl, format!("unknown form `{other}`"))),
                })
            }
            "k" => k = Some(num(value)?),
            "n" => n = Some(num(value)?),
            "h" => h = Some(num(value)?),
            "lambda" => lambda = Some(num(value)?),
            other => return Err(parse_err(hl, format!("unknown header field `{other}`"))),
        }
    }
    let missing = |name: &str| parse_err(hl, format!("header lacks `{name}=`"));
    let kind = kind.ok_or_else(|| missing("kind"))?;
    let k = k.ok_or_else(|| missing("k"))?;
    let n = n.ok_or_else(|| missing("n"))?;
    let h = h.ok_or_else(|| missing("h"))?;
    let form = form.ok_or_else(|| missing("form"))?;
    let n = u32::try_from(n).map_err(|_| parse_err(hl, "n too large"))?;
    let h = u32::try_from(h).map_err(|_| parse_err(hl, "h too large"))?;
    let width = match form {
        Form::Full => k,
        Form::Reduced => k.saturating_sub(1),
    };

    let mut entries = Vec::new();
    let mut rows = 0;
    let mut last_line = hl;
    for (ln, line) in lines {
        let row = parse_row(ln, line, width)?;
        if let Some(col) = row.iter().position(|&v| v >= n) {
            return Err(parse_err(
                ln,
                format!("entry {} in column {col} is not a residue mod {n}", row[col]),
            ));
        }
        entries.extend(row);
        rows += 1;
        last_line = ln;
    }
    let a = ResidueArray::new(kind, form, n, h, k, entries).map_err(|e| match e {
        ArrayError::BadShape(msg) => parse_err(last_line, msg),
        other => FormatError::Array(other),
    })?;
    check_lambda(&a, lambda, rows, hl)?;
    Ok(a)
}

pub fn read_array_json(text: &str) -> Result<ResidueArray, FormatError> {
    serde_json::from_str::<ArrayDoc>(text)?.into_array()
}

/// Text or JSON, decided by the first non-blank character.
pub fn read_any(text: &str) -> Result<ResidueArray, FormatError> {
    if text.trim_start().starts_with('{') {
        read_array_json(text)
    } else {
        read_array(text)
    }
}
