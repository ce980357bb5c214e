//! Point clouds read from CSV, for radius-only runs.

use std::path::Path;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::spaceform::{AmbientPoint, SpaceForm};

/// Accepted deviation of `δ|x|²` from one before renormalization.
pub const CLOUD_NORM_TOL: f64 = 1e-6;

/// Reads one point per row. Lines starting with `#` are skipped.
///
/// Every row must have `space.embedding_dim()` fields. Spherical rows are
/// checked against `|x|² = 1/δ` and then renormalized exactly.
pub fn ingest_point_cloud(path: impl AsRef<Path>, space: &SpaceForm) -> Result<Vec<AmbientPoint>> {
    let file = std::fs::File::open(path.as_ref())?;
    read_point_cloud(file, space)
}

pub fn read_point_cloud(
    reader: impl std::io::Read,
    space: &SpaceForm,
) -> Result<Vec<AmbientPoint>> {
    let expected = space.embedding_dim();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut points = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != expected {
            return Err(Error::Parse {
                line,
                message: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        let coords = record
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("{f:?}: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parse {
                line,
                message: "non-finite coordinate".into(),
            });
        }
        let mut x = DVector::from_vec(coords);
        if !space.is_euclidean() {
            let norm_sq = space.delta() * x.norm_squared();
            if (norm_sq - 1.0).abs() > CLOUD_NORM_TOL {
                return Err(Error::Normalization {
                    line,
                    delta: space.delta(),
                    norm_sq,
                });
            }
            x = space.normalize_point(&x);
        }
        points.push(x);
    }
    if points.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no points in input".into(),
        });
    }
    Ok(points)
}
