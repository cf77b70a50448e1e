//! Rectangular numeric results with a `name[unit]` header and a JSON sidecar.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
    /// Scalars derived during the run, such as a computed pump power.
    pub derived: BTreeMap<String, f64>,
}

impl ResultTable {
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Self {
            columns: columns
                .iter()
                .map(|(n, u)| Column {
                    name: n.to_string(),
                    unit: u.to_string(),
                })
                .collect(),
            ..Self::default()
        }
    }

    pub fn with_columns(columns: Vec<Column>) -> Self {
        Self {
            columns,
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Keep only the named columns, in the given order.
    pub fn select(&self, names: &[&str]) -> Self {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.columns.iter().position(|c| c.name == *n).unwrap_or_else(|| panic!("no column {n}")))
            .collect();
        Self {
            columns: idx.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: self.rows.iter().map(|r| idx.iter().map(|&i| r[i]).collect()).collect(),
            derived: self.derived.clone(),
        }
    }

    pub fn without(&self, name: &str) -> Self {
        let keep: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).filter(|n| *n != name).collect();
        self.select(&keep)
    }

    pub fn header(&self) -> Vec<String> {
        self.columns.iter().map(|c| format!("{}[{}]", c.name, c.unit)).collect()
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(self.header())?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()
    }

    /// Write `<stem>.csv` and `meta.json` into `dir`, returning the CSV path.
    pub fn write(&self, dir: &Path, stem: &str, cfg: &RunConfig, wall_time: f64) -> io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{stem}.csv"));
        self.write_csv(&csv_path)?;
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let meta = json!({
            "scenario": cfg.scenario.name(),
            "figure": cfg.figure.map(|f| f.name()),
            "csv": format!("{stem}.csv"),
            "columns": self.header(),
            "rows": self.rows.len(),
            "derived": self.derived,
            "config": cfg.echo(),
            "version": env!("CARGO_PKG_VERSION"),
            "wall_time_s": wall_time,
            "timestamp_unix": timestamp,
        });
        let text = serde_json::to_string_pretty(&meta).map_err(io::Error::other)?;
        std::fs::write(dir.join("meta.json"), text + "\n")?;
        Ok(csv_path)
    }
}
