use std::fmt::Write as _;
use std::path::Path;

use crate::error::{NavError, Result};

/// Per-step numeric trace. The first column is always `t`, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl TraceTable {
    /// `columns` excludes the leading `t`, which is added here.
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Result<Self> {
        let mut all = vec!["t".to_string()];
        for c in columns {
            let c = c.as_ref();
            if c.is_empty() || c.contains([',', '\n', '\r', '"']) || all.iter().any(|a| a == c) {
                return Err(NavError::invalid(format!(
                    "bad or duplicate column name {c:?}"
                )));
            }
            all.push(c.to_string());
        }
        Ok(TraceTable {
            columns: all,
            rows: Vec::new(),
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, t: f64, values: &[f64]) -> Result<()> {
        if values.len() + 1 != self.columns.len() {
            return Err(NavError::invalid(format!(
                "row has {} values, table has {} columns after t",
                values.len(),
                self.columns.len() - 1
            )));
        }
        if let Some(last) = self.rows.last() {
            if !(t > last[0]) {
                return Err(NavError::invalid(format!(
                    "t = {t} does not increase past {}",
                    last[0]
                )));
            }
        }
        let mut row = Vec::with_capacity(self.columns.len());
        row.push(t);
        row.extend_from_slice(values);
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn last_value(&self, name: &str) -> Option<f64> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.last().map(|r| r[i])
    }

    /// CSV with a header row, LF endings and 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{v:.16e}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| NavError::invalid("empty CSV"))?;
        let names: Vec<&str> = header.split(',').collect();
        if names.first() != Some(&"t") {
            return Err(NavError::invalid("first CSV column must be t"));
        }
        let mut table = TraceTable::new(&names[1..])?;
        for (n, line) in lines.enumerate() {
            let values = line
                .split(',')
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| NavError::invalid(format!("line {}: {e}", n + 2)))?;
            let (t, rest) = values
                .split_first()
                .ok_or_else(|| NavError::invalid(format!("line {} is empty", n + 2)))?;
            table.push(*t, rest)?;
        }
        Ok(table)
    }
}

pub fn write_trace_csv(t: &TraceTable, path: &Path) -> Result<()> {
    std::fs::write(path, t.to_csv())?;
    Ok(())
}

/// Plain CSV for non-trace tables (header plus rows, same number format).
pub fn write_table_csv(columns: &[&str], rows: &[Vec<f64>], path: &Path) -> Result<()> {
    let mut s = columns.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    std::fs::write(path, s)?;
    Ok(())
}
