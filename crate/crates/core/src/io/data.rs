//! Delimited numeric data files.
//!
//! The delimiter is detected from the first data line: comma, tab, semicolon,
//! otherwise runs of whitespace. Lines starting with `#` and blank lines are
//! skipped. The first non-comment line is treated as a header when any of its
//! fields is not a number. For training data the last column holds integer
//! class labels `0..K`.

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Delimiter {
    Char(char),
    Whitespace,
}

impl Delimiter {
    fn detect(line: &str) -> Self {
        [',', '\t', ';']
            .into_iter()
            .find(|c| line.contains(*c))
            .map_or(Delimiter::Whitespace, Delimiter::Char)
    }

    fn split<'a>(&self, line: &'a str) -> Vec<&'a str> {
        match self {
            Delimiter::Char(c) => line.split(*c).map(str::trim).collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
        }
    }
}

/// Feature rows and, when present, their labels.
pub type Features = (Vec<Vec<f64>>, Option<Vec<usize>>);

/// A rectangular numeric table with the source line of each row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
    pub lines: Vec<usize>,
}

pub fn read_table(text: &str) -> Result<Table> {
    let mut delim = None;
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut lines = Vec::new();
    let mut width = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let d = *delim.get_or_insert_with(|| Delimiter::detect(line));
        let fields = d.split(line);
        let parsed: Vec<Option<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        if rows.is_empty() && header.is_none() && parsed.iter().any(Option::is_none) {
            header = Some(fields.iter().map(|f| f.to_string()).collect::<Vec<_>>());
            width = Some(fields.len());
            continue;
        }
        let w = *width.get_or_insert(fields.len());
        if fields.len() != w {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {w} fields, found {}", fields.len()),
            });
        }
        let row = parsed
            .iter()
            .zip(&fields)
            .map(|(v, f)| {
                v.filter(|x| x.is_finite()).ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("`{f}` is not a finite number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
        lines.push(line_no);
    }
    if rows.is_empty() {
        return Err(Error::Invalid("data file has no rows".into()));
    }
    Ok(Table {
        header,
        rows,
        lines,
    })
}

fn label_of(v: f64, line: usize) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v < u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::Parse {
            line,
            msg: format!("label `{v}` is not a non-negative integer"),
        })
    }
}

impl Table {
    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    /// Splits off the last column as class labels.
    pub fn labeled(&self) -> Result<Dataset> {
        let dim = self.width().checked_sub(1).filter(|d| *d > 0).ok_or_else(|| {
            Error::Invalid("training data needs at least one feature column and a label column".into())
        })?;
        let mut data = Dataset::new(dim);
        for (row, &line) in self.rows.iter().zip(&self.lines) {
            data.push(&row[..dim], label_of(row[dim], line)?)?;
        }
        Ok(data)
    }

    /// Feature rows of width `dim`. A table with one extra column is read as
    /// features plus labels; the labels are returned alongside.
    pub fn features(&self, dim: usize) -> Result<Features> {
        let w = self.width();
        if w == dim {
            Ok((self.rows.clone(), None))
        } else if w == dim + 1 {
            let labels = self
                .rows
                .iter()
                .zip(&self.lines)
                .map(|(r, &l)| label_of(r[dim], l))
                .collect::<Result<Vec<_>>>()?;
            Ok((self.rows.iter().map(|r| r[..dim].to_vec()).collect(), Some(labels)))
        } else {
            Err(Error::Dimension {
                expected: dim,
                got: w,
            })
        }
    }
}
