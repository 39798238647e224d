//! Tabular reports rendered as comma-separated records or aligned tables.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// Aligned columns for terminals.
    Table,
    /// Comma-separated records with a header row.
    #[default]
    Records,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Report {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Records => self.render_records(),
            Format::Table => self.render_table(),
        }
    }

    fn render_records(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.columns).chain(&self.rows) {
            let line: Vec<String> = row.iter().map(|f| escape(f)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn render_table(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(String::len).collect();
        for row in &self.rows {
            for (w, f) in widths.iter_mut().zip(row) {
                *w = (*w).max(f.len());
            }
        }
        let mut out = String::new();
        let mut line = |row: &[String]| {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(f, &w)| format!("{f:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        };
        line(&self.columns);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        line(&rule);
        for row in &self.rows {
            line(row);
        }
        out
    }
}

fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_owned()
    }
}

/// Fixed six-decimal rendering used for every real-valued report field.
pub fn real(v: f64) -> String {
    // Adding 0.0 turns -0.0 into 0.0.
    format!("{:.6}", v + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_and_table() {
        let mut r = Report::new(["metric", "value"]);
        r.push(["a,b", "1"]);
        r.push(["longer", "22"]);
        assert_eq!(
            r.render(Format::Records),
            "metric,value\n\"a,b\",1\nlonger,22\n"
        );
        assert_eq!(
            r.render(Format::Table),
            "metric  value\n------  -----\na,b     1\nlonger  22\n"
        );
    }
}
