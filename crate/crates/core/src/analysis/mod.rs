//! Integral inequalities, radius bounds and pinching diagnostics, and the
//! pipeline that assembles them into a [`PinchingReport`].

mod bounds;
mod config;
mod minkowski;
mod normalize;
mod norms;
mod proximity;

use serde::Serialize;

pub use bounds::{
    curvature_norms, pinching_fields, pinching_measurements, pinching_quantities,
    radius_bound_report, total_curvature_check, BoundCheck, CurvatureNorms, PinchingQuantities,
    RadiusBounds, TotalCurvature, UNIT_VOLUME_TOL,
};
pub use config::{AnalysisConfig, DEFAULT_EPSILON_SPACINGS, DEFAULT_THETA};
pub use minkowski::{minkowski_gaps, MinkowskiGap};
pub use normalize::{normalize_to_unit_volume, scale_ball, unit_volume_factor};
pub use norms::{integrate, lp_norm, sup_norm, volume};
pub use proximity::{
    boundary_test_points, proximity_predicates, quasi_isometry_report, sphere_lattice,
    HausdorffBracket, ProximityPredicates, QuasiIsometryReport, QuasiIsometrySample,
    DISTORTION_ROUNDOFF, MIN_PROJECTION_RADIUS, MIN_TEST_POINTS,
};

use crate::curvature::{positivity_report, second_fundamental_form, CurvatureData};
use crate::enclosing::{extrinsic_radius, Ball};
use crate::error::Result;
use crate::shapes::{
    sample_shape, GridSpec, ParametricShape, SampledHypersurface, QUADRATURE_RULE,
};

/// Minkowski gaps may be negative by at most this fraction of the volume.
pub const MINKOWSKI_TOL: f64 = 1e-8;
/// Radius-bound deficits may be negative by at most this much.
pub const DEFICIT_TOL: f64 = 1e-6;
/// Total-curvature margins may be negative by at most this much.
pub const TOTAL_CURVATURE_TOL: f64 = 1e-5;
/// Maclaurin slack may be negative by at most this much.
pub const MACLAURIN_TOL: f64 = 1e-10;
/// Allowed disagreement between the two Newton-trace routes.
pub const NEWTON_TOL: f64 = 1e-8;
/// Allowed distance of `F(x)` from the enclosing sphere.
pub const PROJECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub nodes: Vec<usize>,
    pub level: u32,
    pub samples: usize,
    pub spacing: f64,
    pub rule: &'static str,
    pub derivatives: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallSummary {
    pub center: Vec<f64>,
    pub radius: f64,
    /// `π/(2√δ)` on the sphere, absent in Euclidean space.
    pub hemisphere_limit: Option<f64>,
    pub support_size: usize,
    pub contact_samples: usize,
    pub refinements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureSummary {
    /// `min H_j` over samples for `j = 1 … n`.
    pub min_mean: Vec<f64>,
    pub in_class: bool,
    pub implication_holds: bool,
    pub maclaurin_slack: f64,
    pub newton_discrepancy: f64,
    pub umbilicity_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiIsometrySummary {
    pub max_distortion: f64,
    pub max_excess: f64,
    pub bound_holds: bool,
    pub max_sphere_deviation: f64,
    pub psi_inf: f64,
    pub theta: f64,
    pub theta_ok: bool,
}

/// One pass/fail inequality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    /// The check passes when `value` is at least (or at most, see `upper`) this limit.
    pub limit: f64,
    pub upper: bool,
    pub applicable: bool,
    pub passed: bool,
}

impl Check {
    fn at_least(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit,
            upper: false,
            applicable: true,
            passed: value >= limit,
        }
    }

    fn at_most(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit,
            upper: true,
            applicable: true,
            passed: value <= limit,
        }
    }

    fn skipped(name: &'static str) -> Self {
        Self {
            name,
            value: f64::NAN,
            limit: f64::NAN,
            upper: true,
            applicable: false,
            passed: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PinchingReport {
    pub shape: &'static str,
    pub dim: usize,
    /// Ambient curvature of the analyzed surface (after any normalization).
    pub delta: f64,
    pub config: AnalysisConfig,
    pub grid: GridSummary,
    /// Homothety factor applied before the analysis (1 when not normalized).
    pub normalization_factor: f64,
    pub ball: BallSummary,
    pub norms: CurvatureNorms,
    pub curvature: CurvatureSummary,
    pub minkowski: Vec<MinkowskiGap>,
    pub radius_bounds: RadiusBounds,
    /// Evaluated at unit volume.
    pub pinching: PinchingQuantities,
    pub proximity: ProximityPredicates,
    pub quasi_isometry: QuasiIsometrySummary,
    pub total_curvature: Option<TotalCurvature>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl PinchingReport {
    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

/// Everything produced by one analysis run.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub surface: SampledHypersurface,
    pub curvature: CurvatureData,
    pub ball: Ball,
    pub quasi_isometry: QuasiIsometryReport,
    pub report: PinchingReport,
}

/// Samples `shape` and runs the full analysis.
pub fn analyze(
    shape: &ParametricShape,
    grid: &GridSpec,
    cfg: &AnalysisConfig,
    seed: u64,
) -> Result<Analysis> {
    cfg.validate(shape.dim())?;
    analyze_surface(sample_shape(shape, grid)?, cfg, seed)
}

/// Runs the full analysis on an already sampled surface.
pub fn analyze_surface(
    mut surface: SampledHypersurface,
    cfg: &AnalysisConfig,
    seed: u64,
) -> Result<Analysis> {
    cfg.validate(surface.dim())?;
    let mut curv = second_fundamental_form(&surface)?;
    curv.require_class(cfg.k)?;
    let mut ball = extrinsic_radius(&mut surface, seed)?;
    let mut factor = 1.0;
    if cfg.normalize_volume {
        let (scaled, f) = normalize_to_unit_volume(&surface)?;
        surface = scaled;
        curv = second_fundamental_form(&surface)?;
        ball = scale_ball(&ball, f);
        factor = f;
    }
    let space = surface.space();
    let n = surface.dim();

    let norms = curvature_norms(&surface, &curv, cfg)?;
    let positivity = positivity_report(&curv, n);
    let curvature = CurvatureSummary {
        min_mean: positivity.min_mean.clone(),
        in_class: curv.min_mean(cfg.k) > curv.positivity_tolerance(cfg.k),
        implication_holds: positivity_report(&curv, cfg.k).implication_holds,
        maclaurin_slack: curv.maclaurin_slack(cfg.k.max(2).min(n)),
        newton_discrepancy: curv.newton_discrepancy(),
        umbilicity_defect: curv.umbilicity_defect(),
    };
    let minkowski = minkowski_gaps(&surface, &curv, cfg.k)?;
    let radius_bounds = radius_bound_report(&surface, &curv, &ball, cfg)?;

    let pinching = if (surface.volume() - 1.0).abs() <= UNIT_VOLUME_TOL {
        pinching_measurements(&surface, &curv, &ball, cfg)?
    } else {
        let (unit, f) = normalize_to_unit_volume(&surface)?;
        let unit_curv = second_fundamental_form(&unit)?;
        pinching_measurements(&unit, &unit_curv, &scale_ball(&ball, f), cfg)?
    };

    let epsilon = cfg.epsilon_for(surface.grid_spacing());
    let proximity = proximity_predicates(&surface, &ball, epsilon)?;
    let quasi = quasi_isometry_report(&surface, &ball)?;
    let total_curvature = if space.is_euclidean() {
        Some(total_curvature_check(&surface, &curv, cfg.k)?)
    } else {
        None
    };

    let volume = surface.volume();
    let mut checks = vec![
        Check::at_least(
            "class_membership",
            curv.min_mean(cfg.k),
            curv.positivity_tolerance(cfg.k),
        ),
        Check::at_least(
            "minkowski_gaps",
            minkowski
                .iter()
                .map(|g| g.gap)
                .fold(f64::INFINITY, f64::min),
            -MINKOWSKI_TOL * volume,
        ),
        Check::at_least("radius_deficits", radius_bounds.min_deficit(), -DEFICIT_TOL),
        Check::at_least("maclaurin_chain", curvature.maclaurin_slack, -MACLAURIN_TOL),
        Check::at_most(
            "newton_traces",
            curvature.newton_discrepancy,
            NEWTON_TOL * norms.b_inf.max(1.0).powi(n as i32),
        ),
        Check::at_least(
            "positivity_implication",
            f64::from(u8::from(curvature.implication_holds)),
            1.0,
        ),
        Check::at_most("distortion_bound", quasi.max_excess, DISTORTION_ROUNDOFF),
        Check::at_most(
            "projection_on_sphere",
            quasi.max_sphere_deviation,
            PROJECTION_TOL,
        ),
    ];
    for (name, bound) in [
        ("phi_l2_bound", &pinching.phi_bound),
        ("psi_l2_bound", &pinching.psi_bound),
    ] {
        checks.push(if bound.applicable {
            Check::at_most(name, bound.lhs - bound.rhs, 0.0)
        } else {
            Check::skipped(name)
        });
    }
    checks.push(match &total_curvature {
        Some(t) => Check::at_least("total_curvature", t.margin, -TOTAL_CURVATURE_TOL),
        None => Check::skipped("total_curvature"),
    });
    let passed = checks.iter().all(|c| c.passed);

    let grid = surface.grid();
    let report = PinchingReport {
        shape: surface.shape().name(),
        dim: n,
        delta: space.delta(),
        config: cfg.clone(),
        grid: GridSummary {
            nodes: grid.effective_nodes(),
            level: grid.level(),
            samples: surface.len(),
            spacing: surface.grid_spacing(),
            rule: QUADRATURE_RULE,
            derivatives: grid.derivatives().name(),
        },
        normalization_factor: factor,
        ball: BallSummary {
            center: ball.center.iter().copied().collect(),
            radius: ball.radius,
            hemisphere_limit: if space.is_euclidean() {
                None
            } else {
                Some(space.hemisphere_limit())
            },
            support_size: ball.support.len(),
            contact_samples: ball.contact.len(),
            refinements: ball.stats.refinements,
        },
        norms,
        curvature,
        minkowski,
        radius_bounds,
        pinching,
        quasi_isometry: QuasiIsometrySummary {
            max_distortion: quasi.max_distortion,
            max_excess: quasi.max_excess,
            bound_holds: quasi.bound_holds,
            max_sphere_deviation: quasi.max_sphere_deviation,
            psi_inf: quasi.psi_inf,
            theta: cfg.theta,
            theta_ok: quasi.theta_ok(cfg.theta),
        },
        proximity,
        total_curvature,
        checks,
        passed,
    };
    Ok(Analysis {
        surface,
        curvature: curv,
        ball,
        quasi_isometry: quasi,
        report,
    })
}
