//! Problem file readers. Costs come from headerless CSV (decimal or
//! scientific entries); weights from a one-decimal-per-line file or a JSON
//! array of decimal strings. Weight text is kept as strings here — the
//! library parses it into exact rationals during validation.

use std::fs;
use std::path::Path;

use otinf::{CostMatrix, Error};

use crate::Failure;

pub fn read_cost(path: &Path) -> Result<CostMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    parse_cost_csv(&text).map_err(Failure::Invalid)
}

pub fn read_weights(path: &Path) -> Result<Vec<String>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    parse_weight_text(&text).map_err(Failure::Invalid)
}

pub fn parse_cost_csv(text: &str) -> otinf::Result<CostMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in text.lines() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let field = field.trim();
            let value: f64 = field.parse().map_err(|_| Error::InvalidNumber {
                text: field.to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    CostMatrix::from_rows(&rows)
}

pub fn parse_weight_text(text: &str) -> otinf::Result<Vec<String>> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str::<Vec<String>>(text).map_err(|_| Error::InvalidNumber {
            text: summarize(text),
        });
    }
    Ok(text
        .lines()
        .map(|line| line.trim_end_matches('\r').trim())
        .filter(|line| !line.is_empty())
        .map(str::to_string)
        .collect())
}

fn summarize(text: &str) -> String {
    let flat: String = text.chars().take(40).collect();
    if text.len() > 40 {
        format!("{flat}...")
    } else {
        flat
    }
}
