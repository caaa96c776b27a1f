use crate::asymptotics::fmt_num;

/// A CSV table with a fixed header; cells are preformatted strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    header: String,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self::with_header(&columns.join(","))
    }

    pub fn with_header(header: &str) -> Self {
        Self { file: String::new(), header: header.to_string(), rows: Vec::new() }
    }

    pub fn named(mut self, file: &str) -> Self {
        self.file = file.to_string();
        self
    }

    pub fn num(x: f64) -> String {
        fmt_num(x)
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.clone();
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}
