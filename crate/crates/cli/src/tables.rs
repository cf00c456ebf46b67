//! Self-describing CSV tables: `#` metadata lines, a units line, a header row.

use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub metadata: Vec<(String, String)>,
    /// `(column, unit)`.
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.into(),
            metadata: Vec::new(),
            columns: columns
                .iter()
                .map(|(c, u)| (c.to_string(), u.to_string()))
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push<I: IntoIterator<Item = Cell>>(&mut self, row: I) {
        self.rows.push(row.into_iter().map(|c| c.0).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let units: Vec<String> = self
            .columns
            .iter()
            .map(|(c, u)| format!("{c} [{u}]"))
            .collect();
        let _ = writeln!(out, "# units: {}", units.join(", "));
        let header: Vec<&str> = self.columns.iter().map(|(c, _)| c.as_str()).collect();
        let _ = writeln!(out, "{}", header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// One formatted cell; floats use shortest round-trip form.
pub struct Cell(String);

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell(format!("{v:e}"))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell(v.to_string())
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell(v.to_string())
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell(v)
    }
}

#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => {
        [$($crate::tables::Cell::from($x)),*]
    };
}
