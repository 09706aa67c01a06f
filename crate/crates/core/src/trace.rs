//! Scan output records and their CSV form.
//!
//! The on-disk format is a plain comma-separated table with the header
//! `axis,yield,counts,laser_ac` (optional columns omitted when absent),
//! decimal points, no thousands separators, and at least nine significant
//! digits on floating-point columns.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("axis and yield columns differ in length ({axis} vs {yields})")]
    LengthMismatch { axis: usize, yields: usize },
    #[error("optional column '{name}' has {got} rows, expected {expected}")]
    OptionalLengthMismatch {
        name: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("row {index}: yield must be non-negative and finite, got {value}")]
    InvalidYield { index: usize, value: f64 },
    #[error("row {index}: {name} must be finite, got {value}")]
    NonFinite {
        index: usize,
        name: &'static str,
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsvError {
    #[error("line 1: empty input, expected a header starting with 'axis,yield'")]
    Empty,
    #[error("line 1: unsupported header '{0}', expected 'axis,yield[,counts][,laser_ac]'")]
    BadHeader(String),
    #[error("line {line}: expected {expected} fields, got {got}")]
    WrongFieldCount {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: cannot parse {column} value '{value}'")]
    BadNumber {
        line: usize,
        column: &'static str,
        value: String,
    },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: TraceError },
    #[error("no data rows after the header")]
    NoRows,
}

/// One scan result: axis values, yields, and the optional synthesized-count
/// and laser-autocorrelation companion columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    /// Swept axis values (SI units: s, W, rad, or V depending on the scan).
    pub axis: Vec<f64>,
    /// Time-integrated emission yield per point, arbitrary units, ≥ 0.
    pub yields: Vec<f64>,
    /// Poisson-synthesized detector counts, if noise was requested.
    pub counts: Option<Vec<u64>>,
    /// Second-order interferometric autocorrelation of the laser field, for
    /// delay scans.
    pub laser_autocorrelation: Option<Vec<f64>>,
}

impl Trace {
    pub fn new(axis: Vec<f64>, yields: Vec<f64>) -> Result<Self, TraceError> {
        let trace = Self {
            axis,
            yields,
            counts: None,
            laser_autocorrelation: None,
        };
        trace.validate()?;
        Ok(trace)
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    pub fn validate(&self) -> Result<(), TraceError> {
        if self.axis.len() != self.yields.len() {
            return Err(TraceError::LengthMismatch {
                axis: self.axis.len(),
                yields: self.yields.len(),
            });
        }
        for (i, (&x, &y)) in self.axis.iter().zip(&self.yields).enumerate() {
            if !x.is_finite() {
                return Err(TraceError::NonFinite {
                    index: i,
                    name: "axis",
                    value: x,
                });
            }
            if !y.is_finite() || y < 0.0 {
                return Err(TraceError::InvalidYield { index: i, value: y });
            }
        }
        if let Some(counts) = &self.counts {
            if counts.len() != self.axis.len() {
                return Err(TraceError::OptionalLengthMismatch {
                    name: "counts",
                    got: counts.len(),
                    expected: self.axis.len(),
                });
            }
        }
        if let Some(ac) = &self.laser_autocorrelation {
            if ac.len() != self.axis.len() {
                return Err(TraceError::OptionalLengthMismatch {
                    name: "laser_ac",
                    got: ac.len(),
                    expected: self.axis.len(),
                });
            }
            for (i, &v) in ac.iter().enumerate() {
                if !v.is_finite() {
                    return Err(TraceError::NonFinite {
                        index: i,
                        name: "laser_ac",
                        value: v,
                    });
                }
            }
        }
        Ok(())
    }

    /// Render as CSV. Ten significant digits on every float column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("axis,yield");
        if self.counts.is_some() {
            out.push_str(",counts");
        }
        if self.laser_autocorrelation.is_some() {
            out.push_str(",laser_ac");
        }
        out.push('\n');
        for i in 0..self.len() {
            let _ = write!(out, "{:.9e},{:.9e}", self.axis[i], self.yields[i]);
            if let Some(counts) = &self.counts {
                let _ = write!(out, ",{}", counts[i]);
            }
            if let Some(ac) = &self.laser_autocorrelation {
                let _ = write!(out, ",{:.9e}", ac[i]);
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv_file(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_csv())
    }

    /// Parse the CSV form back. Never panics on malformed input; every error
    /// names the offending line.
    pub fn from_csv_str(input: &str) -> Result<Self, CsvError> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or(CsvError::Empty)?;
        let header = header.trim_end_matches('\r');
        if header.is_empty() {
            return Err(CsvError::Empty);
        }
        let (has_counts, has_ac) = match header {
            "axis,yield" => (false, false),
            "axis,yield,counts" => (true, false),
            "axis,yield,laser_ac" => (false, true),
            "axis,yield,counts,laser_ac" => (true, true),
            other => return Err(CsvError::BadHeader(other.to_string())),
        };
        let expected = 2 + has_counts as usize + has_ac as usize;

        let mut axis = Vec::new();
        let mut yields = Vec::new();
        let mut counts = Vec::new();
        let mut ac = Vec::new();
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let row = raw.trim_end_matches('\r');
            if row.is_empty() {
                continue;
            }
            let fields: Vec<&str> = row.split(',').collect();
            if fields.len() != expected {
                return Err(CsvError::WrongFieldCount {
                    line: line_no,
                    expected,
                    got: fields.len(),
                });
            }
            let parse_f64 = |column: &'static str, s: &str| -> Result<f64, CsvError> {
                s.trim().parse::<f64>().map_err(|_| CsvError::BadNumber {
                    line: line_no,
                    column,
                    value: s.to_string(),
                })
            };
            axis.push(parse_f64("axis", fields[0])?);
            yields.push(parse_f64("yield", fields[1])?);
            let mut next = 2;
            if has_counts {
                let s = fields[next];
                counts.push(s.trim().parse::<u64>().map_err(|_| CsvError::BadNumber {
                    line: line_no,
                    column: "counts",
                    value: s.to_string(),
                })?);
                next += 1;
            }
            if has_ac {
                ac.push(parse_f64("laser_ac", fields[next])?);
            }
        }
        if axis.is_empty() {
            return Err(CsvError::NoRows);
        }
        let n_rows = axis.len();
        let trace = Trace {
            axis,
            yields,
            counts: has_counts.then_some(counts),
            laser_autocorrelation: has_ac.then_some(ac),
        };
        trace.validate().map_err(|source| CsvError::Invalid {
            // Row index → 1-based line number (header is line 1).
            line: match source {
                TraceError::InvalidYield { index, .. }
                | TraceError::NonFinite { index, .. } => index + 2,
                _ => n_rows + 1,
            },
            source,
        })?;
        Ok(trace)
    }

    pub fn read_csv_file(path: &Path) -> Result<Self, CsvReadError> {
        let text = fs::read_to_string(path).map_err(|source| CsvReadError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_csv_str(&text).map_err(CsvReadError::Parse)
    }

    /// Best available ordinate for fitting: synthesized counts when present,
    /// raw yields otherwise.
    pub fn fit_ordinate(&self) -> Vec<f64> {
        match &self.counts {
            Some(c) => c.iter().map(|&v| v as f64).collect(),
            None => self.yields.clone(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CsvReadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] CsvError),
}
