//! Run configuration, read from a single TOML file.
//!
//! ```toml
//! seed = 0            # shuffle seed for the enclosing-ball solver
//! delta = 0.0         # ambient curvature: 0 for Euclidean space, > 0 for a round sphere
//!
//! [shape]
//! kind = "ellipsoid"
//! semiaxes = [2.0, 1.0, 1.0]
//!
//! [grid]
//! nodes = [64, 128]   # per axis; defaults depend on the dimension
//! level = 0           # each level doubles every axis
//! derivatives = "analytic"
//!
//! [analysis]
//! k = 2
//! p = 1.0
//! normalize_volume = false
//! epsilon = 0.05      # defaults to five grid spacings
//! theta = 0.5
//!
//! [sweep]
//! parameter = "amplitude"
//! values = [0.2, 0.1, 0.05]
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Unknown keys anywhere are rejected.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use pinch_core::analysis::AnalysisConfig;
use pinch_core::shapes::{DerivativeMode, GridSpec, ParametricShape};
use serde::{Deserialize, Serialize};

pub const DEFAULT_OUTPUT_DIR: &str = "pinch-out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeConfig {
    RoundSphere {
        #[serde(default)]
        center: Option<Vec<f64>>,
        radius: f64,
        #[serde(default)]
        dim: Option<usize>,
    },
    Ellipsoid {
        #[serde(default)]
        center: Option<Vec<f64>>,
        semiaxes: Vec<f64>,
    },
    PerturbedSphere {
        #[serde(default)]
        center: Option<Vec<f64>>,
        radius: f64,
        amplitude: f64,
        #[serde(default)]
        dim: Option<usize>,
    },
    GeodesicSphere {
        #[serde(default)]
        pole: Option<Vec<f64>>,
        radius: f64,
        #[serde(default)]
        dim: Option<usize>,
    },
    PerturbedGeodesicSphere {
        #[serde(default)]
        pole: Option<Vec<f64>>,
        radius: f64,
        amplitude: f64,
        #[serde(default)]
        dim: Option<usize>,
    },
    PointCloud {
        path: PathBuf,
        /// Intrinsic dimension of the sampled hypersurface.
        #[serde(default)]
        dim: Option<usize>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub nodes: Option<Vec<usize>>,
    pub level: u32,
    pub derivatives: Derivatives,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivatives {
    #[default]
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Amplitude,
    Radius,
    P,
    K,
    Epsilon,
    Theta,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Amplitude => "amplitude",
            SweepParameter::Radius => "radius",
            SweepParameter::P => "p",
            SweepParameter::K => "k",
            SweepParameter::Epsilon => "epsilon",
            SweepParameter::Theta => "theta",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub delta: f64,
    pub shape: ShapeConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// A parsed configuration together with the bytes it was read from.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub source: Vec<u8>,
    pub path: PathBuf,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).context("invalid configuration")?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let source =
        std::fs::read(path).with_context(|| format!("cannot read config {}", path.display()))?;
    let text = std::str::from_utf8(&source).context("config is not valid UTF-8")?;
    let config = parse_config(text).with_context(|| format!("in {}", path.display()))?;
    Ok(LoadedConfig {
        config,
        source,
        path: path.to_path_buf(),
    })
}

fn origin(dim: usize) -> Vec<f64> {
    vec![0.0; dim + 1]
}

impl RunConfig {
    /// Intrinsic dimension of the configured surface.
    pub fn dim(&self) -> usize {
        match &self.shape {
            ShapeConfig::Ellipsoid { semiaxes, .. } => semiaxes.len().saturating_sub(1),
            ShapeConfig::RoundSphere {
                center: Some(c), ..
            }
            | ShapeConfig::PerturbedSphere {
                center: Some(c), ..
            } => c.len().saturating_sub(1),
            ShapeConfig::GeodesicSphere { pole: Some(p), .. }
            | ShapeConfig::PerturbedGeodesicSphere { pole: Some(p), .. } => {
                p.len().saturating_sub(2)
            }
            ShapeConfig::RoundSphere { dim, .. }
            | ShapeConfig::PerturbedSphere { dim, .. }
            | ShapeConfig::GeodesicSphere { dim, .. }
            | ShapeConfig::PerturbedGeodesicSphere { dim, .. }
            | ShapeConfig::PointCloud { dim, .. } => dim.unwrap_or(2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.delta >= 0.0 && self.delta.is_finite(),
            "delta must be finite and >= 0, got {}",
            self.delta
        );
        let spherical_shape = matches!(
            self.shape,
            ShapeConfig::GeodesicSphere { .. } | ShapeConfig::PerturbedGeodesicSphere { .. }
        );
        let euclidean_shape = matches!(
            self.shape,
            ShapeConfig::RoundSphere { .. }
                | ShapeConfig::Ellipsoid { .. }
                | ShapeConfig::PerturbedSphere { .. }
        );
        if spherical_shape && self.delta <= 0.0 {
            bail!("shape kind requires delta > 0");
        }
        if euclidean_shape && self.delta != 0.0 {
            bail!("shape kind lives in Euclidean space; set delta = 0");
        }
        let n = self.dim();
        ensure!(n >= 2, "intrinsic dimension must be >= 2");
        if !matches!(self.shape, ShapeConfig::PointCloud { .. }) {
            self.analysis.validate(n).map_err(anyhow::Error::new)?;
            self.grid_spec()?;
        }
        if let Some(sweep) = &self.sweep {
            ensure!(!sweep.values.is_empty(), "sweep.values must not be empty");
            ensure!(
                sweep.values.iter().all(|v| v.is_finite()),
                "sweep.values must be finite"
            );
        }
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        let base = match &self.grid.nodes {
            Some(nodes) => GridSpec::new(nodes.clone()).map_err(anyhow::Error::new)?,
            None => GridSpec::default_for(self.dim()),
        };
        let mode = match self.grid.derivatives {
            Derivatives::Analytic => DerivativeMode::Analytic,
            Derivatives::FiniteDifference => DerivativeMode::FiniteDifference,
        };
        Ok(base.with_level(self.grid.level).with_derivatives(mode))
    }

    /// The catalog shape described by the configuration.
    pub fn build_shape(&self) -> Result<ParametricShape> {
        let n = self.dim();
        let pole = |p: &Option<Vec<f64>>| {
            p.clone()
                .unwrap_or_else(|| ParametricShape::north_pole(self.delta, n))
        };
        let shape = match &self.shape {
            ShapeConfig::RoundSphere { center, radius, .. } => {
                ParametricShape::round_sphere(center.clone().unwrap_or_else(|| origin(n)), *radius)
            }
            ShapeConfig::Ellipsoid { center, semiaxes } => ParametricShape::ellipsoid(
                center.clone().unwrap_or_else(|| origin(n)),
                semiaxes.clone(),
            ),
            ShapeConfig::PerturbedSphere {
                center,
                radius,
                amplitude,
                ..
            } => ParametricShape::perturbed_sphere(
                center.clone().unwrap_or_else(|| origin(n)),
                *radius,
                *amplitude,
            ),
            ShapeConfig::GeodesicSphere {
                pole: p, radius, ..
            } => ParametricShape::geodesic_sphere(self.delta, pole(p), *radius),
            ShapeConfig::PerturbedGeodesicSphere {
                pole: p,
                radius,
                amplitude,
                ..
            } => {
                ParametricShape::perturbed_geodesic_sphere(self.delta, pole(p), *radius, *amplitude)
            }
            ShapeConfig::PointCloud { .. } => bail!("point clouds support radius-only runs"),
        };
        shape.map_err(anyhow::Error::new)
    }

    /// Copy of the configuration with one sweep parameter replaced.
    pub fn with_parameter(&self, parameter: SweepParameter, value: f64) -> Result<RunConfig> {
        let mut cfg = self.clone();
        cfg.sweep = None;
        match parameter {
            SweepParameter::Amplitude => match &mut cfg.shape {
                ShapeConfig::PerturbedSphere { amplitude, .. }
                | ShapeConfig::PerturbedGeodesicSphere { amplitude, .. } => *amplitude = value,
                _ => bail!("shape has no amplitude parameter"),
            },
            SweepParameter::Radius => match &mut cfg.shape {
                ShapeConfig::RoundSphere { radius, .. }
                | ShapeConfig::PerturbedSphere { radius, .. }
                | ShapeConfig::GeodesicSphere { radius, .. }
                | ShapeConfig::PerturbedGeodesicSphere { radius, .. } => *radius = value,
                _ => bail!("shape has no radius parameter"),
            },
            SweepParameter::P => cfg.analysis.p = value,
            SweepParameter::K => {
                ensure!(
                    value.fract() == 0.0 && value >= 1.0,
                    "k must be a positive integer, got {value}"
                );
                cfg.analysis.k = value as usize;
            }
            SweepParameter::Epsilon => cfg.analysis.epsilon = Some(value),
            SweepParameter::Theta => cfg.analysis.theta = value,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
