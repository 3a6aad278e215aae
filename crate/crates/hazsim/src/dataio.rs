//! CSV covariate input and dataset output.
//!
//! Files are comma-separated with a header row and `.` as the decimal mark.
//! Output floats are printed like C's `%.17g`, which round-trips every
//! `f64` exactly; missing values are empty fields.

use std::fmt;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use hazsim_core::table::{CovariateTable, TableError};

#[derive(Debug)]
pub enum DataError {
    Io { path: PathBuf, source: io::Error },
    Csv { path: PathBuf, source: csv::Error },
    MissingHeader { path: PathBuf },
    DuplicateHeader { path: PathBuf, name: String },
    /// Rows and columns are 1-based data rows (the header is not counted).
    Ragged { path: PathBuf, row: usize, expected: usize, got: usize },
    Missing { path: PathBuf, row: usize, column: usize },
    NonNumeric { path: PathBuf, row: usize, column: usize, value: String },
    Table { path: PathBuf, source: TableError },
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            DataError::Csv { path, source } => write!(f, "{}: {source}", path.display()),
            DataError::MissingHeader { path } => write!(f, "{}: missing header row", path.display()),
            DataError::DuplicateHeader { path, name } => {
                write!(f, "{}: duplicate column '{name}'", path.display())
            }
            DataError::Ragged { path, row, expected, got } => write!(
                f,
                "{}: row {row} has {got} fields, expected {expected}",
                path.display()
            ),
            DataError::Missing { path, row, column } => {
                write!(f, "{}: missing value at row {row}, column {column}", path.display())
            }
            DataError::NonNumeric { path, row, column, value } => write!(
                f,
                "{}: non-numeric value '{value}' at row {row}, column {column}",
                path.display()
            ),
            DataError::Table { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for DataError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            DataError::Io { source, .. } => Some(source),
            DataError::Csv { source, .. } => Some(source),
            DataError::Table { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// A numeric table in which cells may be missing.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub names: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl NumericTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn parse_table<R: Read>(reader: R, path: &Path) -> Result<NumericTable, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let csv_err = |source| DataError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(DataError::MissingHeader { path: path.to_path_buf() });
    }
    let names: Vec<String> = header.iter().map(str::to_owned).collect();
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            return Err(DataError::DuplicateHeader {
                path: path.to_path_buf(),
                name: name.clone(),
            });
        }
    }
    let mut rows = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let row = r + 1;
        if record.len() != names.len() {
            return Err(DataError::Ragged {
                path: path.to_path_buf(),
                row,
                expected: names.len(),
                got: record.len(),
            });
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                if cell.is_empty() || cell == "." {
                    return Ok(None);
                }
                match cell.parse::<f64>() {
                    Ok(v) if !v.is_nan() => Ok(Some(v)),
                    _ => Err(DataError::NonNumeric {
                        path: path.to_path_buf(),
                        row,
                        column: c + 1,
                        value: cell.to_owned(),
                    }),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(values);
    }
    Ok(NumericTable { names, rows })
}

/// Read a numeric CSV in which empty cells are allowed (for example a
/// simulated multi-state dataset).
pub fn read_numeric(path: &Path) -> Result<NumericTable, DataError> {
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_table(file, path)
}

/// Read a covariate CSV: every cell must be a finite number.
pub fn read_covariates(path: &Path) -> Result<CovariateTable, DataError> {
    let table = read_numeric(path)?;
    covariates_from(table, path)
}

/// As [`read_covariates`], from any reader; `label` names the source in
/// errors.
pub fn read_covariates_from<R: Read>(reader: R, label: &Path) -> Result<CovariateTable, DataError> {
    covariates_from(parse_table(reader, label)?, label)
}

fn covariates_from(table: NumericTable, path: &Path) -> Result<CovariateTable, DataError> {
    let mut rows = Vec::with_capacity(table.rows.len());
    for (r, row) in table.rows.iter().enumerate() {
        let mut values = Vec::with_capacity(row.len());
        for (c, v) in row.iter().enumerate() {
            match v {
                Some(x) if x.is_finite() => values.push(*x),
                Some(x) => {
                    return Err(DataError::NonNumeric {
                        path: path.to_path_buf(),
                        row: r + 1,
                        column: c + 1,
                        value: x.to_string(),
                    })
                }
                None => {
                    return Err(DataError::Missing {
                        path: path.to_path_buf(),
                        row: r + 1,
                        column: c + 1,
                    })
                }
            }
        }
        rows.push(values);
    }
    CovariateTable::new(table.names, rows).map_err(|source| DataError::Table {
        path: path.to_path_buf(),
        source,
    })
}

/// Format like C's `%.17g`.
pub fn format_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if !(-4..17).contains(&exp) {
        let m = strip_fraction_zeros(&format!("{}.{}", &digits[..1], &digits[1..]));
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{m}e{esign}{:02}", exp.abs());
    }
    let body = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    format!("{sign}{}", strip_fraction_zeros(&body))
}

fn strip_fraction_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

/// Write a header and rows; `None` cells become empty fields.
pub fn write_rows<W: Write>(out: W, names: &[String], rows: &[Vec<Option<f64>>]) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(names)?;
    let mut record = Vec::with_capacity(names.len());
    for row in rows {
        record.clear();
        record.extend(row.iter().map(|v| v.map(format_g17).unwrap_or_default()));
        w.write_record(&record)?;
    }
    w.flush()
}

/// Write a dataset to `path`.
pub fn write_dataset(path: &Path, names: &[String], rows: &[Vec<Option<f64>>]) -> Result<(), DataError> {
    let io_err = |source| DataError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut buf = io::BufWriter::new(file);
    write_rows(&mut buf, names, rows).map_err(io_err)?;
    buf.flush().map_err(io_err)
}
