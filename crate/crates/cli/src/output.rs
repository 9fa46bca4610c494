//! Tabular output. Floats are written with 17 significant digits so that
//! re-parsing recovers them bit for bit.

use crate::config::Format;
use crate::error::{CliError, CliResult};
use cpgraphene::Constants;
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Float(x) => x.to_string().to_lowercase(),
            Cell::Int(n) => n.to_string(),
            // no quoting in this format: keep text free of delimiters
            Cell::Text(s) => s.replace([',', '\n', '\r'], ";"),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

pub fn header(command: &str, constants: &Constants) -> Vec<(String, String)> {
    vec![
        ("program".into(), format!("cpgraphene {}", env!("CARGO_PKG_VERSION"))),
        ("command".into(), command.into()),
        ("hbar_c_eV_nm".into(), format!("{:?}", constants.hbar_c)),
        ("boltzmann_eV_per_K".into(), format!("{:?}", constants.boltzmann)),
        ("fine_structure".into(), format!("{:?}", constants.fine_structure)),
        ("fermi_velocity_over_c".into(), format!("{:?}", constants.fermi_velocity_ratio)),
        ("atomic_unit_polarizability_m3".into(), format!("{:?}", constants.polarizability_au)),
    ]
}

impl Table {
    pub fn new(metadata: Vec<(String, String)>, columns: &[&str]) -> Self {
        Table { metadata, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            s.push_str(&format!("# {k} = {v}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let metadata: Map<String, Value> = self.metadata.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({ "metadata": metadata, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON serialization of plain values");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn write(&self, format: Format, path: Option<&Path>) -> CliResult<()> {
        let text = self.render(format);
        match path {
            Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
            None => std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
        }
    }
}
