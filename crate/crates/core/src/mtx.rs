//! Matrix Market coordinate reader.

use std::fs;
use std::path::Path;

use crate::banded::BandedMatrix;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

/// Reads a square `coordinate real` (or `integer`) Matrix Market file,
/// `general` or `symmetric`, and infers the tightest bandwidths.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<BandedMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_matrix_market(&text, path)
}

/// Parses Matrix Market text; `origin` is only used in error messages.
pub fn parse_matrix_market(text: &str, origin: &Path) -> Result<BandedMatrix> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };

    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let symmetry = parse_header(header).map_err(|m| err(hline, m))?;

    let mut size: Option<(usize, usize, usize)> = None;
    let mut dense: Option<DenseMatrix> = None;
    let mut seen = 0usize;

    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut fields = line.split_whitespace();
        match size {
            None => {
                let mut next_usize = |what: &str| -> Result<usize> {
                    fields
                        .next()
                        .ok_or_else(|| err(lineno, format!("missing {what}")))?
                        .parse::<usize>()
                        .map_err(|e| err(lineno, format!("bad {what}: {e}")))
                };
                let rows = next_usize("row count")?;
                let cols = next_usize("column count")?;
                let nnz = next_usize("entry count")?;
                if rows != cols {
                    return Err(err(lineno, format!("matrix is {rows}x{cols}, expected square")));
                }
                size = Some((rows, cols, nnz));
                dense = Some(DenseMatrix::zeros(rows, cols));
            }
            Some((n, _, _)) => {
                let m = dense.as_mut().expect("allocated with size line");
                let i = parse_index(fields.next(), n, "row").map_err(|e| err(lineno, e))?;
                let j = parse_index(fields.next(), n, "column").map_err(|e| err(lineno, e))?;
                let v: f64 = fields
                    .next()
                    .ok_or_else(|| err(lineno, "missing value".into()))?
                    .parse()
                    .map_err(|e| err(lineno, format!("bad value: {e}")))?;
                m[(i, j)] += v;
                if symmetry == Symmetry::Symmetric && i != j {
                    m[(j, i)] += v;
                }
                seen += 1;
            }
        }
    }

    let (_, _, nnz) = size.ok_or_else(|| err(hline, "missing size line".into()))?;
    if seen != nnz {
        return Err(err(
            text.lines().count(),
            format!("expected {nnz} entries, found {seen}"),
        ));
    }
    BandedMatrix::from_dense_tight(&dense.expect("allocated with size line"))
}

fn parse_header(header: &str) -> std::result::Result<Symmetry, String> {
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(format!("not a Matrix Market header: {header:?}"));
    }
    if tokens[2] != "coordinate" {
        return Err(format!("unsupported format {:?}, expected coordinate", tokens[2]));
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(format!("unsupported field {:?}, expected real", tokens[3]));
    }
    match tokens[4].as_str() {
        "general" => Ok(Symmetry::General),
        "symmetric" => Ok(Symmetry::Symmetric),
        other => Err(format!("unsupported symmetry {other:?}")),
    }
}

fn parse_index(field: Option<&str>, n: usize, what: &str) -> std::result::Result<usize, String> {
    let raw = field.ok_or_else(|| format!("missing {what} index"))?;
    let idx: usize = raw.parse().map_err(|e| format!("bad {what} index {raw:?}: {e}"))?;
    if idx == 0 || idx > n {
        return Err(format!("{what} index {idx} out of range 1..={n}"));
    }
    Ok(idx - 1)
}
