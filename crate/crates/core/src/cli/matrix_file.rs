//! Reading 4×4 unitaries from disk.
//!
//! JSON files hold `{"matrix": [[[re, im], ...], ...]}`. Text files hold four
//! lines of four whitespace-separated entries such as `0.5+0.5i`, `-1e-3-2i`,
//! `0.7` or `-i`. Blank lines and lines starting with `#` are skipped.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::qcore::matrix::{ComplexMatrix, C64};

/// Default unitarity tolerance applied after parsing.
pub const DEFAULT_UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Json,
    Txt,
}

impl MatrixFormat {
    /// `.json` selects JSON, anything else text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => MatrixFormat::Json,
            _ => MatrixFormat::Txt,
        }
    }
}

impl fmt::Display for MatrixFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixFormat::Json => "json",
            MatrixFormat::Txt => "txt",
        })
    }
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(MatrixFormat::Json),
            "txt" => Ok(MatrixFormat::Txt),
            other => Err(Error::Parse(format!("unknown matrix format {other:?}"))),
        }
    }
}

#[derive(Deserialize)]
struct JsonMatrix {
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Reads and validates a two-qubit unitary.
pub fn parse_matrix_file(path: &Path, format: MatrixFormat, unitary_tol: f64) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let m = parse_matrix_str(&text, format)?;
    let residual = m.unitarity_residual();
    if residual > unitary_tol {
        return Err(Error::NotUnitary { residual });
    }
    Ok(m)
}

/// Parses without the unitarity check.
pub fn parse_matrix_str(text: &str, format: MatrixFormat) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<C64>> = match format {
        MatrixFormat::Json => {
            let parsed: JsonMatrix =
                serde_json::from_str(text).map_err(|e| Error::Parse(format!("json: {e}")))?;
            parsed
                .matrix
                .into_iter()
                .map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect())
                .collect()
        }
        MatrixFormat::Txt => text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split_whitespace().map(parse_complex).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?,
    };
    if rows.len() != 4 {
        return Err(Error::Parse(format!("expected 4 rows, found {}", rows.len())));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != 4) {
        return Err(Error::Parse(format!("row {} has {} entries, expected 4", i + 1, r.len())));
    }
    ComplexMatrix::from_rows(&rows)
}

fn parse_real(s: &str, token: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("malformed number {token:?}")))
}

/// Coefficient of `i`, where a bare sign means ±1.
fn parse_imag(s: &str, token: &str) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s, token),
    }
}

/// One entry in the text format.
pub fn parse_complex(token: &str) -> Result<C64> {
    let Some(body) = token.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(parse_real(token, token)?, 0.0));
    };
    // the sign separating real from imaginary part: not leading, not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(parse_real(&body[..k], token)?, parse_imag(&body[k..], token)?)),
        None => Ok(C64::new(0.0, parse_imag(body, token)?)),
    }
}
