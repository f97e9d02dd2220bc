//! CSV assembly: RFC-4180 quoting, `.` decimal separator, and C-style
//! `%.12e` numeric formatting so datasets are byte-reproducible.

use std::io::{self, Write};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// %.12e scientific float.
    Num(f64),
    /// Plain integer.
    Int(i64),
    /// Free text, quoted when needed.
    Text(String),
    /// Empty field (used on per-point failures).
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

/// C-style `%.12e`: 12 fractional digits and a signed two-digit exponent.
pub fn format_e12(x: f64) -> String {
    if !x.is_finite() {
        // never emitted into datasets; failures go to the error column
        return String::from("nan");
    }
    let raw = format!("{:.12e}", x);
    let (mantissa, exponent) = raw.split_once('e').expect("exponential format");
    let (sign, digits) = match exponent.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exponent),
    };
    if digits.len() >= 2 {
        format!("{mantissa}e{sign}{digits}")
    } else {
        format!("{mantissa}e{sign}0{digits}")
    }
}

fn quote_if_needed(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// A header plus rows, including the trailing per-row error column.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
}

/// One dataset row: the data cells in column order, and an optional error
/// message for grid points that failed.
#[derive(Debug, Clone)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub error: Option<String>,
}

impl Row {
    pub fn ok(cells: Vec<Cell>) -> Self {
        Row { cells, error: None }
    }

    pub fn failed(cells: Vec<Cell>, error: String) -> Self {
        Row {
            cells,
            error: Some(error),
        }
    }
}

impl Dataset {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Dataset {
            columns,
            rows: Vec::new(),
        }
    }

    /// Full header including the error column.
    pub fn header(&self) -> String {
        let mut cols: Vec<&str> = self.columns.to_vec();
        cols.push("error");
        cols.join(",")
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.header())?;
        for row in &self.rows {
            let mut fields: Vec<String> = Vec::with_capacity(self.columns.len() + 1);
            for i in 0..self.columns.len() {
                let cell = row.cells.get(i).unwrap_or(&Cell::Empty);
                fields.push(match cell {
                    Cell::Num(x) => format_e12(*x),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(t) => quote_if_needed(t),
                    Cell::Empty => String::new(),
                });
            }
            fields.push(match &row.error {
                Some(msg) => quote_if_needed(msg),
                None => String::new(),
            });
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}
