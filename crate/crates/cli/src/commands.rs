//! The `catalog`, `analyze` and `sweep` subcommands.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use pinch_core::analysis::{analyze, Analysis};
use pinch_core::enclosing::enclose_points;
use pinch_core::shapes::ingest_point_cloud;
use pinch_core::SpaceForm;
use serde::Serialize;

use crate::catalog::{filtered, render_text, Space};
use crate::config::{load_config, LoadedConfig, RunConfig, ShapeConfig, DEFAULT_OUTPUT_DIR};
use crate::output::{
    config_hash, ensure_dir, write_flat_csv, write_json, write_quasi_isometry_csv, AnalyzeOutputs,
    Provenance, RadiusReport, ReportFile, TOOL, VERSION,
};
use crate::ExitStatus;

pub fn cmd_catalog(space: Space, json: bool) -> Result<String> {
    let entries = filtered(space);
    if json {
        Ok(serde_json::to_string_pretty(&entries)? + "\n")
    } else {
        Ok(render_text(&entries))
    }
}

fn output_dir(loaded: &LoadedConfig, out: Option<&Path>) -> PathBuf {
    if let Some(dir) = out {
        return dir.to_path_buf();
    }
    let dir = loaded
        .config
        .output
        .dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    if dir.is_relative() {
        loaded.path.parent().map_or(dir.clone(), |p| p.join(&dir))
    } else {
        dir
    }
}

fn provenance(loaded: &LoadedConfig, cfg: &RunConfig) -> Provenance {
    Provenance {
        tool: TOOL,
        version: VERSION,
        config_sha256: config_hash(&loaded.source),
        seed: cfg.seed,
        grid_level: cfg.grid.level,
    }
}

fn run_analysis(cfg: &RunConfig) -> Result<Analysis> {
    let shape = cfg.build_shape()?;
    let grid = cfg.grid_spec()?;
    Ok(analyze(&shape, &grid, &cfg.analysis, cfg.seed)?)
}

fn radius_only(loaded: &LoadedConfig, path: &Path, dir: &Path) -> Result<ExitStatus> {
    let cfg = &loaded.config;
    let space = SpaceForm::new(cfg.delta, cfg.dim() + 1)?;
    let resolved = if path.is_relative() {
        loaded
            .path
            .parent()
            .map_or(path.to_path_buf(), |p| p.join(path))
    } else {
        path.to_path_buf()
    };
    let points = ingest_point_cloud(&resolved, &space)
        .with_context(|| format!("reading {}", resolved.display()))?;
    let ball = enclose_points(&space, &points, cfg.seed)?;
    let report = RadiusReport {
        provenance: provenance(loaded, cfg),
        points: points.len(),
        delta: cfg.delta,
        center: ball.center.iter().copied().collect(),
        radius: ball.radius,
        hemisphere_limit: if space.is_euclidean() {
            None
        } else {
            Some(space.hemisphere_limit())
        },
        support: ball.support.clone(),
    };
    ensure_dir(dir)?;
    write_json(&dir.join("radius.json"), &report)?;
    println!(
        "extrinsic radius {:.12} from {} points",
        ball.radius,
        points.len()
    );
    println!("wrote {}", dir.join("radius.json").display());
    Ok(ExitStatus::Pass)
}

pub fn cmd_analyze(config: &Path, out: Option<&Path>) -> Result<ExitStatus> {
    let loaded = load_config(config)?;
    let dir = output_dir(&loaded, out);
    let cfg = &loaded.config;
    if let ShapeConfig::PointCloud { path, .. } = &cfg.shape {
        return radius_only(&loaded, path, &dir);
    }
    let analysis = run_analysis(cfg)?;
    let report = &analysis.report;
    ensure_dir(&dir)?;
    let files = AnalyzeOutputs::in_dir(&dir);
    let doc = ReportFile {
        provenance: provenance(&loaded, cfg),
        report,
    };
    write_json(&files.json, &doc)?;
    write_flat_csv(&files.csv, &doc)?;
    write_quasi_isometry_csv(&files.quasi_isometry, &analysis.quasi_isometry)?;

    println!(
        "shape {} (n = {}, delta = {}), {} samples",
        report.shape, report.dim, report.delta, report.grid.samples
    );
    println!("extrinsic radius {:.12}", report.ball.radius);
    println!(
        "deficits: D_p = {:.6e}, D_inf = {:.6e}, D_H = {:.6e}",
        report.radius_bounds.deficit_p,
        report.radius_bounds.deficit_inf,
        report.radius_bounds.deficit_mean
    );
    for c in &report.checks {
        let status = match (c.applicable, c.passed) {
            (false, _) => "n/a ",
            (true, true) => "pass",
            (true, false) => "FAIL",
        };
        println!(
            "check {:<24} {status} value = {:.6e} limit = {:.6e}",
            c.name, c.value, c.limit
        );
    }
    println!("wrote {}", dir.display());
    if report.passed {
        Ok(ExitStatus::Pass)
    } else {
        eprintln!("failing checks: {}", report.failed_checks().join(", "));
        Ok(ExitStatus::CheckFailed)
    }
}

#[derive(Debug, Serialize)]
struct SweepRow {
    parameter: &'static str,
    value: f64,
    status: &'static str,
    passed: Option<bool>,
    pinching_constant: Option<f64>,
    phi_l2_sq: Option<f64>,
    psi_l2_sq: Option<f64>,
    hausdorff: Option<f64>,
    max_distortion: Option<f64>,
    deficit_p: Option<f64>,
    failed_checks: String,
    error: String,
}

pub fn cmd_sweep(config: &Path, out: Option<&Path>) -> Result<ExitStatus> {
    let loaded = load_config(config)?;
    let cfg = &loaded.config;
    let sweep = cfg
        .sweep
        .clone()
        .context("configuration has no [sweep] section")?;
    if matches!(cfg.shape, ShapeConfig::PointCloud { .. }) {
        anyhow::bail!("point clouds cannot be swept");
    }
    let dir = output_dir(&loaded, out);
    ensure_dir(&dir)?;
    let path = dir.join("sweep.csv");
    let mut w = csv::Writer::from_path(&path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    let mut worst = ExitStatus::Pass;
    for &value in &sweep.values {
        let outcome = cfg
            .with_parameter(sweep.parameter, value)
            .and_then(|c| run_analysis(&c));
        let row = match outcome {
            Ok(a) => {
                let r = &a.report;
                if !r.passed {
                    worst = worst.max(ExitStatus::CheckFailed);
                }
                SweepRow {
                    parameter: sweep.parameter.name(),
                    value,
                    status: "ok",
                    passed: Some(r.passed),
                    pinching_constant: Some(r.pinching.pinching_constant),
                    phi_l2_sq: Some(r.pinching.phi_l2_sq),
                    psi_l2_sq: Some(r.pinching.psi_l2_sq),
                    hausdorff: Some(r.proximity.hausdorff.estimate),
                    max_distortion: Some(r.quasi_isometry.max_distortion),
                    deficit_p: Some(r.radius_bounds.deficit_p),
                    failed_checks: r.failed_checks().join(";"),
                    error: String::new(),
                }
            }
            Err(e) => {
                worst = worst.max(ExitStatus::classify(&e));
                eprintln!("{} = {value}: {e:#}", sweep.parameter.name());
                SweepRow {
                    parameter: sweep.parameter.name(),
                    value,
                    status: "error",
                    passed: None,
                    pinching_constant: None,
                    phi_l2_sq: None,
                    psi_l2_sq: None,
                    hausdorff: None,
                    max_distortion: None,
                    deficit_p: None,
                    failed_checks: String::new(),
                    error: format!("{e:#}"),
                }
            }
        };
        println!(
            "{} = {value}: {}{}",
            row.parameter,
            row.status,
            row.pinching_constant
                .map_or(String::new(), |c| format!(", C = {c:.6e}"))
        );
        w.serialize(&row)?;
    }
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(worst)
}
