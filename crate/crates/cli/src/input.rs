//! Matrix ingestion: a JSON document or a CSV table.

use std::fmt;
use std::io::Read;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;
use symcamel::{CovarianceMatrix, Ordering, PhaseSpace};

use crate::CliError;

/// Relative asymmetry accepted on ingestion unless `--tol` overrides it.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-9;
pub const DEFAULT_HBAR: f64 = 1.0;

/// A validated covariance input, always in block-xp ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDocument {
    pub n: usize,
    pub hbar: f64,
    /// Ordering the matrix was supplied in.
    pub ordering: Ordering,
    /// Block-xp covariance.
    pub sigma: DMatrix<f64>,
}

impl InputDocument {
    pub fn covariance(&self) -> Result<CovarianceMatrix, CliError> {
        Ok(CovarianceMatrix::new(self.sigma.clone(), self.hbar)?)
    }
}

/// Values given on the command line; the document wins when both are given,
/// and a disagreement is an error.
#[derive(Debug, Clone, Copy, Default)]
pub struct IngestOptions {
    pub hbar: Option<f64>,
    pub ordering: Option<Ordering>,
    pub symmetry_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Structured,
    Csv,
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputFormat::Structured => f.write_str("structured"),
            InputFormat::Csv => f.write_str("csv"),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    n: usize,
    hbar: Option<f64>,
    ordering: Option<Ordering>,
    sigma: RawSigma,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawSigma {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

/// Reads from a path, or from standard input when the path is `-`.
pub fn parse_input(path: &Path, opts: &IngestOptions) -> Result<InputDocument, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| CliError::Io(format!("standard input: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
    };
    parse_str(&text, opts)
}

pub fn detect_format(text: &str) -> InputFormat {
    match text.trim_start().chars().next() {
        Some('{') => InputFormat::Structured,
        _ => InputFormat::Csv,
    }
}

pub fn parse_str(text: &str, opts: &IngestOptions) -> Result<InputDocument, CliError> {
    match detect_format(text) {
        InputFormat::Structured => parse_structured(text, opts),
        InputFormat::Csv => parse_csv(text, opts),
    }
}

pub fn parse_structured(text: &str, opts: &IngestOptions) -> Result<InputDocument, CliError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| CliError::Parse {
        context: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if raw.n == 0 {
        return Err(CliError::Validation("field `n` must be at least 1".into()));
    }
    let dim = 2 * raw.n;
    let entries: Vec<f64> = match raw.sigma {
        RawSigma::Rows(rows) => {
            if rows.len() != dim {
                return Err(CliError::Validation(format!(
                    "field `sigma`: expected {dim} rows for n = {}, got {}",
                    raw.n,
                    rows.len()
                )));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != dim {
                    return Err(CliError::Validation(format!(
                        "field `sigma`, row {}: expected {dim} entries, got {}",
                        i + 1,
                        row.len()
                    )));
                }
            }
            rows.into_iter().flatten().collect()
        }
        RawSigma::Flat(values) => {
            if values.len() != dim * dim {
                return Err(CliError::Validation(format!(
                    "field `sigma`: expected {} entries for n = {}, got {}",
                    dim * dim,
                    raw.n,
                    values.len()
                )));
            }
            values
        }
    };
    let hbar = merge("hbar", raw.hbar, opts.hbar)?.unwrap_or(DEFAULT_HBAR);
    let ordering = merge("ordering", raw.ordering, opts.ordering)?.unwrap_or_default();
    finish(raw.n, hbar, ordering, DMatrix::from_row_slice(dim, dim, &entries), opts)
}

/// `#` lines are comments; every other non-blank line is a row.
pub fn parse_csv(text: &str, opts: &IngestOptions) -> Result<InputDocument, CliError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row = trimmed
            .split(',')
            .enumerate()
            .map(|(field, cell)| {
                cell.trim().parse::<f64>().map_err(|e| CliError::Parse {
                    context: format!("line {}, field {}", lineno + 1, field + 1),
                    message: format!("invalid number {:?}: {e}", cell.trim()),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::Parse {
                    context: format!("line {}", lineno + 1),
                    message: format!("expected {} fields, got {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    let dim = rows.len();
    if dim == 0 {
        return Err(CliError::Validation("no matrix rows found".into()));
    }
    if !dim.is_multiple_of(2) {
        return Err(CliError::Validation(format!("matrix dimension must be even, got {dim}")));
    }
    if rows[0].len() != dim {
        return Err(CliError::Validation(format!("matrix must be square, got {dim} rows of {} fields", rows[0].len())));
    }
    let entries: Vec<f64> = rows.into_iter().flatten().collect();
    let hbar = opts.hbar.unwrap_or(DEFAULT_HBAR);
    let ordering = opts.ordering.unwrap_or_default();
    finish(dim / 2, hbar, ordering, DMatrix::from_row_slice(dim, dim, &entries), opts)
}

fn merge<T: PartialEq + fmt::Debug + Copy>(name: &str, doc: Option<T>, flag: Option<T>) -> Result<Option<T>, CliError> {
    match (doc, flag) {
        (Some(d), Some(f)) if d != f => {
            Err(CliError::Validation(format!("`{name}` is {d:?} in the document but {f:?} on the command line")))
        }
        (Some(d), _) => Ok(Some(d)),
        (None, f) => Ok(f),
    }
}

fn finish(
    n: usize,
    hbar: f64,
    ordering: Ordering,
    sigma: DMatrix<f64>,
    opts: &IngestOptions,
) -> Result<InputDocument, CliError> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(CliError::Validation(format!("hbar must be positive and finite, got {hbar}")));
    }
    if let Some((idx, _)) = sigma.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        let dim = sigma.nrows();
        // column-major storage
        return Err(CliError::Validation(format!("entry ({}, {}) is not finite", idx % dim + 1, idx / dim + 1)));
    }
    let tol = opts.symmetry_tol.unwrap_or(DEFAULT_SYMMETRY_TOL);
    let scale = sigma.norm().max(f64::MIN_POSITIVE);
    let asym = (&sigma - sigma.transpose()).norm() / scale;
    if asym > tol {
        return Err(CliError::Validation(format!(
            "matrix is not symmetric: relative asymmetry {asym:.3e} exceeds {tol:.1e}"
        )));
    }
    let space = PhaseSpace::new(n)?;
    let sigma = (&sigma + sigma.transpose()) * 0.5;
    let sigma = space.to_block_xp(&sigma, ordering)?;
    Ok(InputDocument { n, hbar, ordering, sigma })
}
