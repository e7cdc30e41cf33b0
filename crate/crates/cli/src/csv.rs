//! CSV emission with 17 significant digits.

use std::fmt::Write as _;

pub struct Csv {
    columns: usize,
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { columns: header.len(), text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns, "row width differs from header");
        let cells: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses the rows of a CSV written by [`Csv`], skipping the header.
pub fn parse(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().ok_or("empty CSV")?.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for l in lines {
        let row: Result<Vec<f64>, _> = l.split(',').map(|c| c.parse::<f64>()).collect();
        let row = row.map_err(|e| format!("{l:?}: {e}"))?;
        if row.len() != header.len() {
            return Err(format!("row {l:?} has {} cells, header has {}", row.len(), header.len()));
        }
        rows.push(row);
    }
    Ok((header, rows))
}
