//! JSON, aligned-table and CSV rendering of command results.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Table {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn aligned(&self) -> String {
        let cols = self.headers.len();
        let mut width = vec![0; cols];
        for row in std::iter::once(&self.headers).chain(&self.rows) {
            for (i, c) in row.iter().enumerate().take(cols) {
                width[i] = width[i].max(c.chars().count());
            }
        }
        let line = |row: &[String]| -> String {
            let cells: Vec<String> =
                row.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = width[i])).collect();
            cells.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        out.push_str(&width.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    fn csv(&self) -> String {
        let esc = |c: &String| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        };
        let mut out = String::new();
        for row in std::iter::once(&self.headers).chain(&self.rows) {
            out.push_str(&row.iter().map(esc).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

pub struct Output {
    value: Value,
    table: Option<Table>,
}

impl Output {
    pub fn new(value: Value) -> Output {
        Output { value, table: None }
    }

    pub fn with_table(mut self, t: Table) -> Output {
        self.table = Some(t);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match (format, &self.table) {
            (Format::Table, Some(t)) => t.aligned(),
            (Format::Csv, Some(t)) => t.csv(),
            _ => {
                let mut s = serde_json::to_string_pretty(&self.value).unwrap_or_default();
                s.push('\n');
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment_and_csv() {
        let mut t = Table::new(&["a", "bb"]);
        t.row(vec!["xyz".into(), "1".into()]);
        t.row(vec!["q".into(), "x,y".into()]);
        assert_eq!(t.aligned(), "a    bb\n---  ---\nxyz  1\nq    x,y\n");
        assert_eq!(t.csv(), "a,bb\nxyz,1\nq,\"x,y\"\n");
    }
}
