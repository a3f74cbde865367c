use std::io::Write;

use serde_json::json;

use super::config::ExperimentConfig;

/// Column-oriented output rendered as CSV or a JSON envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Twelve significant digits, independent of locale.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    pub fn to_json(&self, command: &str, config: &ExperimentConfig) -> String {
        let v = json!({
            "command": command,
            "config": config.entries(),
            "header": self.header,
            "rows": self.rows,
        });
        serde_json::to_string_pretty(&v).expect("table serializes") + "\n"
    }
}
