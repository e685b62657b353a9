//! CSV ingestion: comma separated, `.` decimals, optional header row.

use std::path::Path;
use std::str::FromStr;

use csv::{ReaderBuilder, StringRecord, Trim};
use lts_core::model::Dataset;
use lts_core::numerics::Matrix;

use crate::error::{CliError, Result};

/// Which column holds the response.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResponseColumn {
    /// 1-based position.
    Ordinal(usize),
    /// Header name.
    Name(String),
}

impl Default for ResponseColumn {
    fn default() -> Self {
        ResponseColumn::Ordinal(1)
    }
}

impl FromStr for ResponseColumn {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(CliError::BadArgument("empty response column".into()));
        }
        match s.parse::<usize>() {
            Ok(0) => Err(CliError::BadArgument("response ordinals start at 1".into())),
            Ok(k) => Ok(ResponseColumn::Ordinal(k)),
            Err(_) => Ok(ResponseColumn::Name(s.to_string())),
        }
    }
}

/// Parsed numeric table with an optional header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

fn parse_number(field: &str) -> Option<f64> {
    field.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses CSV bytes. The first record is a header when none of its fields is
/// numeric. Row and column numbers in errors are 1-based file coordinates.
pub fn parse_table(bytes: &[u8]) -> Result<Table> {
    let mut reader = ReaderBuilder::new().has_headers(false).flexible(true).trim(Trim::All).from_reader(bytes);
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut record = StringRecord::new();
    let mut first = true;
    loop {
        match reader.read_record(&mut record) {
            Ok(true) => {}
            Ok(false) => break,
            Err(e) => return Err(CliError::Csv(e.to_string())),
        }
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if first {
            first = false;
            if record.iter().all(|f| parse_number(f).is_none()) {
                header = Some(record.iter().map(str::to_string).collect());
                continue;
            }
        }
        let expected = header.as_ref().map(Vec::len).or_else(|| rows.first().map(Vec::len));
        if let Some(expected) = expected {
            if record.len() != expected {
                return Err(CliError::Ragged { row: line, expected, found: record.len() });
            }
        }
        let mut row = Vec::with_capacity(record.len());
        for (c, field) in record.iter().enumerate() {
            match parse_number(field) {
                Some(v) => row.push(v),
                None => return Err(CliError::NotNumeric { row: line, col: c + 1, value: field.to_string() }),
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::NoRows);
    }
    Ok(Table { header, rows })
}

/// Splits a table into a dataset: the response column becomes `y`, the rest
/// `X` in file order, with a leading ones column when `intercept` is set.
pub fn table_to_dataset(table: &Table, response: &ResponseColumn, intercept: bool) -> Result<Dataset> {
    let cols = table.cols();
    let target = match response {
        ResponseColumn::Ordinal(k) if (1..=cols).contains(k) => k - 1,
        ResponseColumn::Ordinal(k) => return Err(CliError::ColumnOutOfRange { ordinal: *k, cols }),
        ResponseColumn::Name(name) => table
            .header
            .as_ref()
            .and_then(|h| h.iter().position(|c| c == name))
            .ok_or_else(|| CliError::UnknownColumn(name.clone()))?,
    };
    let p = cols - 1 + usize::from(intercept);
    if p == 0 {
        return Err(CliError::BadArgument("no regressor columns besides the response".into()));
    }
    let n = table.rows.len();
    let mut x = Vec::with_capacity(n * p);
    let mut y = Vec::with_capacity(n);
    for row in &table.rows {
        if intercept {
            x.push(1.0);
        }
        for (c, v) in row.iter().enumerate() {
            if c == target {
                y.push(*v);
            } else {
                x.push(*v);
            }
        }
    }
    Ok(Dataset::new(Matrix::new(n, p, x)?, y, intercept)?)
}

pub fn parse_csv(bytes: &[u8], response: &ResponseColumn, intercept: bool) -> Result<Dataset> {
    table_to_dataset(&parse_table(bytes)?, response, intercept)
}

pub fn load_csv(path: &Path, response: &ResponseColumn, intercept: bool) -> Result<Dataset> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_csv(&bytes, response, intercept)
}

/// Writes `y` then the regressors (without an intercept column), with a
/// `y,x1,..,xp` header. Numbers use the shortest round-trip form.
pub fn write_csv(dataset: &Dataset, out: impl std::io::Write) -> Result<()> {
    let skip = usize::from(dataset.has_intercept());
    let p = dataset.p() - skip;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Output(e.to_string());
    let mut header = vec!["y".to_string()];
    header.extend((1..=p).map(|j| format!("x{j}")));
    w.write_record(&header).map_err(io)?;
    for i in 0..dataset.n() {
        let mut rec = vec![dataset.y()[i].to_string()];
        rec.extend(dataset.x().row(i)[skip..].iter().map(f64::to_string));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))
}
