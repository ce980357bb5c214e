//! Report files: JSON with a fixed key order, and CSV.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use pinch_core::analysis::{PinchingReport, QuasiIsometryReport};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "pinch";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn config_hash(source: &[u8]) -> String {
    hex::encode(Sha256::digest(source))
}

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub seed: u64,
    pub grid_level: u32,
}

#[derive(Debug, Serialize)]
pub struct ReportFile<'a> {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub report: &'a PinchingReport,
}

#[derive(Debug, Serialize)]
pub struct RadiusReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub points: usize,
    pub delta: f64,
    pub center: Vec<f64>,
    pub radius: f64,
    pub hemisphere_limit: Option<f64>,
    pub support: Vec<usize>,
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// `quantity,value` rows for every leaf of a JSON document, keys joined by dots.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
        let join = |key: &str| {
            if prefix.is_empty() {
                key.to_string()
            } else {
                format!("{prefix}.{key}")
            }
        };
        match value {
            Value::Object(map) => map.iter().for_each(|(k, v)| walk(&join(k), v, out)),
            Value::Array(items) => items
                .iter()
                .enumerate()
                .for_each(|(i, v)| walk(&join(&i.to_string()), v, out)),
            Value::Null => out.push((prefix.to_string(), String::new())),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

pub fn write_flat_csv(path: &Path, value: &impl Serialize) -> Result<()> {
    let json = serde_json::to_value(value)?;
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(["quantity", "value"])?;
    for (k, v) in flatten(&json) {
        w.write_record([k, v])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_quasi_isometry_csv(path: &Path, report: &QuasiIsometryReport) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    let d = report.samples.first().map_or(0, |s| s.image.len());
    let n = report.samples.first().map_or(0, |s| s.stretch.len());
    let mut header = vec!["sample".to_string(), "distortion".into(), "bound".into()];
    header.extend((0..n).map(|i| format!("stretch_{i}")));
    header.extend((0..d).map(|i| format!("image_{i}")));
    w.write_record(&header)?;
    for (i, s) in report.samples.iter().enumerate() {
        let mut row = vec![i.to_string(), s.distortion.to_string(), s.bound.to_string()];
        row.extend(s.stretch.iter().map(f64::to_string));
        row.extend(s.image.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Paths of the files written by `analyze`.
pub struct AnalyzeOutputs {
    pub json: PathBuf,
    pub csv: PathBuf,
    pub quasi_isometry: PathBuf,
}

impl AnalyzeOutputs {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            json: dir.join("report.json"),
            csv: dir.join("report.csv"),
            quasi_isometry: dir.join("quasi_isometry.csv"),
        }
    }
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    use super::*;

    #[test]
    fn flatten_paths() {
        let rows = flatten(&json!({"a": {"b": 1.5, "c": [1, 2]}, "d": null, "e": "x,y"}));
        assert_eq!(
            rows,
            vec![
                ("a.b".into(), "1.5".into()),
                ("a.c.0".into(), "1".into()),
                ("a.c.1".into(), "2".into()),
                ("d".into(), String::new()),
                ("e".into(), "x,y".into()),
            ]
        );
    }

    #[test]
    fn hash_is_sha256() {
        assert_eq!(
            config_hash(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
