//! Covariate rows and per-observation settings.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Rectangular table of finite covariate values, one row per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariateTable {
    names: Vec<String>,
    values: Vec<f64>,
    n_rows: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableError {
    DuplicateName(String),
    EmptyName { column: usize },
    Ragged { row: usize, expected: usize, got: usize },
    NonFinite { row: usize, column: usize },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::DuplicateName(name) => write!(f, "duplicate column name '{name}'"),
            TableError::EmptyName { column } => write!(f, "column {column} has an empty name"),
            TableError::Ragged { row, expected, got } => {
                write!(f, "row {row} has {got} values, expected {expected}")
            }
            TableError::NonFinite { row, column } => {
                write!(f, "missing or non-finite value at row {row}, column {column}")
            }
        }
    }
}

impl core::error::Error for TableError {}

impl CovariateTable {
    /// Build from column names and rows. Rows and columns in errors are
    /// 1-based.
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, TableError> {
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(TableError::EmptyName { column: i + 1 });
            }
            if names[..i].contains(name) {
                return Err(TableError::DuplicateName(name.clone()));
            }
        }
        let width = names.len();
        let mut values = Vec::with_capacity(rows.len() * width);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(TableError::Ragged {
                    row: r + 1,
                    expected: width,
                    got: row.len(),
                });
            }
            if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                return Err(TableError::NonFinite {
                    row: r + 1,
                    column: c + 1,
                });
            }
            values.extend_from_slice(row);
        }
        Ok(Self {
            names,
            values,
            n_rows: rows.len(),
        })
    }

    /// `n` rows with no columns.
    pub fn empty(n: usize) -> Self {
        Self {
            names: Vec::new(),
            values: Vec::new(),
            n_rows: n,
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.names.len();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.column_index(name)?;
        Some((0..self.n_rows).map(|i| self.row(i)[c]).collect())
    }
}

/// A setting that is either shared by all observations or given per row.
#[derive(Debug, Clone, PartialEq)]
pub enum ObsValue<T> {
    Scalar(T),
    PerObs(Vec<T>),
}

impl<T: Copy> ObsValue<T> {
    pub fn get(&self, i: usize) -> T {
        match self {
            ObsValue::Scalar(v) => *v,
            ObsValue::PerObs(v) => v[i],
        }
    }

    /// Fails with the actual length if a per-row vector does not have `n`
    /// entries.
    pub fn check_len(&self, n: usize) -> Result<(), usize> {
        match self {
            ObsValue::PerObs(v) if v.len() != n => Err(v.len()),
            _ => Ok(()),
        }
    }
}

impl<T> From<T> for ObsValue<T> {
    fn from(v: T) -> Self {
        ObsValue::Scalar(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn builds_and_indexes() {
        let t = CovariateTable::new(
            vec!["trt".to_string(), "age".to_string()],
            vec![vec![1.0, 50.0], vec![0.0, 47.5]],
        )
        .unwrap();
        assert_eq!(t.n_rows(), 2);
        assert_eq!(t.row(1), &[0.0, 47.5]);
        assert_eq!(t.column("age"), Some(vec![50.0, 47.5]));
        assert_eq!(t.column_index("bmi"), None);
    }

    #[test]
    fn rejects_bad_tables() {
        let dup = CovariateTable::new(vec!["a".into(), "a".into()], vec![]);
        assert_eq!(dup, Err(TableError::DuplicateName("a".into())));
        let ragged = CovariateTable::new(vec!["a".into()], vec![vec![1.0], vec![1.0, 2.0]]);
        assert!(matches!(ragged, Err(TableError::Ragged { row: 2, .. })));
        let nan = CovariateTable::new(vec!["a".into()], vec![vec![f64::NAN]]);
        assert!(matches!(nan, Err(TableError::NonFinite { row: 1, column: 1 })));
    }

    #[test]
    fn obs_values() {
        let s = ObsValue::Scalar(3.0);
        assert_eq!(s.get(10), 3.0);
        let v = ObsValue::PerObs(vec![1.0, 2.0]);
        assert_eq!(v.get(1), 2.0);
        assert_eq!(v.check_len(3), Err(2));
        assert_eq!(s.check_len(3), Ok(()));
    }
}
