//! Fixed formatting for CSV tables and JSON reports.
//!
//! CSV floats carry 9 significant digits in scientific notation; JSON floats
//! use the shortest representation that parses back to the same `f64`.

use serde::Serialize;

use crate::CliError;

/// CSV float: 9 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.8e}")
}

/// Comma-separated table with a mandatory header.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<String>,
}

/// One CSV cell.
pub enum Cell {
    Float(f64),
    Int(usize),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x)
    }
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.header.len(), "row width must match the header");
        let row: Vec<String> = cells
            .into_iter()
            .map(|c| match c {
                Cell::Float(x) => float(x),
                Cell::Int(n) => n.to_string(),
            })
            .collect();
        self.rows.push(row.join(","));
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }
}

/// Pretty JSON with a trailing newline. Struct fields keep declaration
/// order, maps are sorted.
pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Side-by-side comparison with a quoted value; never asserted.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub computed: f64,
    pub reference: Option<f64>,
    /// `computed / reference - 1`.
    pub relative_difference: Option<f64>,
}

impl Comparison {
    pub fn new(computed: f64, reference: Option<f64>) -> Self {
        Comparison {
            computed,
            reference,
            relative_difference: reference.filter(|r| *r != 0.0).map(|r| computed / r - 1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["n", "p"]);
        t.push(vec![3usize.into(), 0.1.into()]);
        t.push(vec![4usize.into(), (-2.5e-300).into()]);
        assert_eq!(t.render(), "n,p\n3,1.00000000e-1\n4,-2.50000000e-300\n");
        assert_eq!(float(1.0 / 3.0).parse::<f64>().unwrap(), 0.333333333);
    }

    #[test]
    fn comparison() {
        let c = Comparison::new(1.28e8, Some(1.25e8));
        assert!((c.relative_difference.unwrap() - 0.024).abs() < 1e-12);
        assert!(Comparison::new(1.0, None).relative_difference.is_none());
        assert!(Comparison::new(1.0, Some(0.0)).relative_difference.is_none());
    }
}
