//! Deterministic CSV writing (versioned header comment) with an optional
//! JSON mirror per file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Schema version line prepended to every CSV.
pub const CSV_HEADER: &str = "# sea-scbf-results v1";

pub struct TableWriter {
    dir: PathBuf,
    json_mirror: bool,
}

impl TableWriter {
    pub fn new(dir: &Path, json_mirror: bool) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(TableWriter {
            dir: dir.to_path_buf(),
            json_mirror,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Write `name.csv` (and `name.json` when mirroring) from a column
    /// header and stringified rows.
    pub fn write(
        &self,
        name: &str,
        columns: &[&str],
        rows: &[Vec<String>],
    ) -> std::io::Result<()> {
        let mut csv = String::new();
        writeln!(csv, "{CSV_HEADER}").unwrap();
        writeln!(csv, "{}", columns.join(",")).unwrap();
        for row in rows {
            writeln!(csv, "{}", row.join(",")).unwrap();
        }
        std::fs::write(self.dir.join(format!("{name}.csv")), csv)?;

        if self.json_mirror {
            let records: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let map: serde_json::Map<String, serde_json::Value> = columns
                        .iter()
                        .zip(row.iter())
                        .map(|(c, v)| {
                            let value = v
                                .parse::<f64>()
                                .ok()
                                .and_then(serde_json::Number::from_f64)
                                .map(serde_json::Value::Number)
                                .unwrap_or_else(|| serde_json::Value::String(v.clone()));
                            (c.to_string(), value)
                        })
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            let text = serde_json::to_string_pretty(&records)?;
            std::fs::write(self.dir.join(format!("{name}.json")), text)?;
        }
        Ok(())
    }
}

pub fn fmt(x: f64) -> String {
    format!("{x}")
}
