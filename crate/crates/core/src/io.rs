//! File formats: matrix/vector JSON, matrix CSV, profile and table CSV.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chain::{ProbabilityVector, StochasticMatrix};
use crate::error::{Error, Result};
use crate::mixing::MixingProfile;

/// Writes through a temporary file in the same directory, then renames it into place.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Config(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::Io(e)
    })
}

pub fn read_matrix_json(path: &Path) -> Result<StochasticMatrix> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn write_matrix_json(p: &StochasticMatrix, path: &Path) -> Result<()> {
    atomic_write(path, serde_json::to_string_pretty(p)?.as_bytes())
}

pub fn read_vector_json(path: &Path) -> Result<ProbabilityVector> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// One matrix row per line, comma separated; blank lines and `#` comments are skipped.
pub fn parse_matrix_csv(text: &str) -> Result<StochasticMatrix> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| Error::InvalidMatrix(format!("bad entry {v:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    StochasticMatrix::new(rows)
}

pub fn read_matrix_csv(path: &Path) -> Result<StochasticMatrix> {
    parse_matrix_csv(&std::fs::read_to_string(path)?)
}

/// A CSV table preceded by `# key: value` header lines.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { meta: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"meta": {...}, "rows": [{column: value}, ...]}` with numeric cells emitted as numbers.
    pub fn to_json(&self) -> serde_json::Value {
        let cell = |s: &str| {
            if let Ok(v) = s.parse::<i64>() {
                return serde_json::json!(v);
            }
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => serde_json::json!(v),
                _ => serde_json::json!(s),
            }
        };
        let meta: serde_json::Map<String, serde_json::Value> =
            self.meta.iter().map(|(k, v)| (k.clone(), serde_json::json!(v))).collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> =
                    self.columns.iter().zip(r).map(|(c, v)| (c.clone(), cell(v))).collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "meta": meta, "rows": rows })
    }
}

/// `t,beta,d` rows of a mixing profile.
pub fn profile_table(profile: &MixingProfile) -> Table {
    let mut t = Table::new(&["t", "beta", "d"]);
    for (i, (b, d)) in profile.beta.values().iter().zip(&profile.d).enumerate() {
        t.push(vec![i.to_string(), format!("{b:e}"), format!("{d:e}")]);
    }
    t
}
