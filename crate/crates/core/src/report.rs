//! Deterministic CSV output: comma delimiter, LF line endings, one header
//! line, numbers with nine significant digits.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

/// Formats `v` with nine significant digits in the shortest of fixed or
/// exponent notation, trailing zeros removed.
pub fn fmt_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A CSV table under construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

/// One cell of a [`Table`] row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_sig9(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    /// Appends a row; panics when the width differs from the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row.iter().map(Cell::render).collect());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

/// Parsed CSV: header plus numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCsv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl NumericCsv {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines.next().ok_or("empty file")?.split(',').map(|s| s.trim().to_string()).collect();
        let rows = lines
            .enumerate()
            .map(|(i, line)| {
                let row: Vec<f64> = line
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|e| format!("line {}: {e}", i + 2)))
                    .collect::<std::result::Result<_, _>>()?;
                if row.len() != header.len() {
                    return Err(format!("line {}: expected {} fields, found {}", i + 2, header.len(), row.len()));
                }
                Ok(row)
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(1.0), "1");
        assert_eq!(fmt_sig9(-2.5), "-2.5");
        assert_eq!(fmt_sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(fmt_sig9(6.36), "6.36");
        assert_eq!(fmt_sig9(123456789.4), "123456789");
        assert_eq!(fmt_sig9(1234567894.0), "1.23456789e9");
        assert_eq!(fmt_sig9(0.000123456789123), "0.000123456789");
        assert_eq!(fmt_sig9(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig9(9.9999999999), "10");
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![1.0.into(), 2usize.into(), "x".into()]);
        assert_eq!(t.render(), "a,b,c\n1,2,x\n");
        let p = NumericCsv::parse("a,b\n1,2\n3,4\n").unwrap();
        assert_eq!(p.column("b").unwrap(), vec![2.0, 4.0]);
        assert!(NumericCsv::parse("a,b\n1\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_relative_precision(v in -1e12f64..1e12) {
            let back: f64 = fmt_sig9(v).parse().unwrap();
            prop_assert!((back - v).abs() <= 5e-9 * v.abs());
        }
    }
}
