use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    /// Clipped or otherwise unavailable value.
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

/// Sidecar written next to each data file.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub software: &'static str,
    pub version: &'static str,
    /// Complete resolved configuration in config-file syntax; rerunning it
    /// reproduces the data file byte for byte.
    pub config: String,
    pub data_file: String,
    pub columns: Vec<&'static str>,
    pub nu_used: Vec<Option<f64>>,
    pub nu_global_min: Option<f64>,
    pub wall_clock_seconds: f64,
    pub finished_unix_seconds: u64,
}

fn with_suffix(prefix: &str, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{prefix}{suffix}"))
}

fn write_tmp(path: &Path, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let tmp = PathBuf::from(format!("{}.tmp", path.display()));
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    Ok(tmp)
}

/// Writes `<prefix>.csv` and `<prefix>.json`. Both are staged as `.tmp`
/// files and renamed only once both are complete.
pub fn write_outputs(prefix: &str, table: &Table, meta: &Metadata) -> Result<(PathBuf, PathBuf), CliError> {
    let csv_path = with_suffix(prefix, ".csv");
    let json_path = with_suffix(prefix, ".json");
    let data = table.to_csv().map_err(|e| CliError::io(&csv_path, std::io::Error::other(e)))?;
    let json = serde_json::to_vec_pretty(meta).map_err(|e| CliError::io(&json_path, std::io::Error::other(e)))?;

    let csv_tmp = write_tmp(&csv_path, &data)?;
    let json_tmp = match write_tmp(&json_path, &json) {
        Ok(p) => p,
        Err(e) => {
            let _ = fs::remove_file(&csv_tmp);
            return Err(e);
        }
    };
    let finish = fs::rename(&csv_tmp, &csv_path)
        .map_err(|e| CliError::io(&csv_path, e))
        .and_then(|_| fs::rename(&json_tmp, &json_path).map_err(|e| CliError::io(&json_path, e)));
    if let Err(e) = finish {
        let _ = fs::remove_file(&csv_tmp);
        let _ = fs::remove_file(&json_tmp);
        let _ = fs::remove_file(&csv_path);
        return Err(e);
    }
    Ok((csv_path, json_path))
}
