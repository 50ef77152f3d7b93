//! Day-by-bin matrices: a header row of bin labels, then one row per day.

use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct DayMatrix {
    labels: Vec<String>,
    rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DataError {
    Empty,
    Ragged { line: u64, expected: usize, got: usize },
    NotNumeric { line: u64, column: usize, cell: String },
    Csv(String),
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataError::Empty => write!(f, "data file has no header or no day rows"),
            DataError::Ragged { line, expected, got } => {
                write!(f, "line {line}: expected {expected} cells, found {got}")
            }
            DataError::NotNumeric { line, column, cell } => {
                write!(f, "line {line}, column {column}: `{cell}` is not a finite number")
            }
            DataError::Csv(msg) => write!(f, "malformed csv: {msg}"),
        }
    }
}

impl std::error::Error for DataError {}

impl DayMatrix {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, DataError> {
        if labels.is_empty() || rows.is_empty() {
            return Err(DataError::Empty);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != labels.len() {
                return Err(DataError::Ragged {
                    line: i as u64 + 2,
                    expected: labels.len(),
                    got: row.len(),
                });
            }
            if let Some(column) = row.iter().position(|v| !v.is_finite()) {
                return Err(DataError::NotNumeric {
                    line: i as u64 + 2,
                    column: column + 1,
                    cell: row[column].to_string(),
                });
            }
        }
        Ok(Self { labels, rows })
    }

    /// Matrix with labels `bin_0, bin_1, …`.
    pub fn unlabeled(rows: Vec<Vec<f64>>) -> Result<Self, DataError> {
        let width = rows.first().map_or(0, Vec::len);
        Self::new((0..width).map(|i| format!("bin_{i}")).collect(), rows)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn days(&self) -> usize {
        self.rows.len()
    }

    pub fn bins(&self) -> usize {
        self.labels.len()
    }

    /// Header plus comma-separated rows, shortest round-trip floats, `\n`
    /// line endings.
    pub fn to_csv_string(&self) -> String {
        let mut out = self.labels.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn parse_day_csv(text: &str) -> Result<DayMatrix, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| DataError::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if labels.is_empty() {
        return Err(DataError::Empty);
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| DataError::Csv(e.to_string()))?;
        let line = record.position().map_or(rows.len() as u64 + 2, |p| p.line());
        if record.len() != labels.len() {
            return Err(DataError::Ragged {
                line,
                expected: labels.len(),
                got: record.len(),
            });
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(column, cell)| {
                cell.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| DataError::NotNumeric {
                        line,
                        column: column + 1,
                        cell: cell.to_string(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    DayMatrix::new(labels, rows)
}
