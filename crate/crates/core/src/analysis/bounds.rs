//! Radius lower bounds, pinching quantities and the total-curvature bound.

use rayon::prelude::*;
use serde::Serialize;

use super::config::AnalysisConfig;
use super::norms::{integrate, lp_norm, sup_norm};
use crate::curvature::{scalar_curvature, CurvatureData};
use crate::enclosing::Ball;
use crate::error::{Error, Result};
use crate::numeric::unit_sphere_volume;
use crate::shapes::SampledHypersurface;

/// Volumes within this distance of one count as normalized.
pub const UNIT_VOLUME_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureNorms {
    pub volume: f64,
    pub hk_p: f64,
    pub hk_2p: f64,
    pub hk_inf: f64,
    pub h_inf: f64,
    pub b_inf: f64,
}

pub fn curvature_norms(
    surface: &SampledHypersurface,
    curv: &CurvatureData,
    cfg: &AnalysisConfig,
) -> Result<CurvatureNorms> {
    let w = surface.weights();
    let hk = curv.mean_field(cfg.k);
    Ok(CurvatureNorms {
        volume: surface.volume(),
        hk_p: lp_norm(&hk, cfg.p, &w)?,
        hk_2p: lp_norm(&hk, 2.0 * cfg.p, &w)?,
        hk_inf: sup_norm(&hk),
        h_inf: curv.sup_mean(),
        b_inf: curv.sup_second_form(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusBounds {
    pub k: usize,
    pub p: f64,
    /// `t_δ(R)`.
    pub tan_radius: f64,
    /// `t_δ(R)^k − V^{1/p}/‖H_k‖_p`.
    pub deficit_p: f64,
    /// `D_p / t_δ(R)^k`, invariant under homothety.
    pub relative_deficit_p: f64,
    /// `t_δ(R)^k − 1/‖H_k‖_∞`.
    pub deficit_inf: f64,
    /// `t_δ(R) − 1/‖H‖_∞`.
    pub deficit_mean: f64,
    /// Scalar-curvature form of the `k = 2`, `p = 1` bound, when `H₂ > 0`:
    /// `t_δ(R)² − n(n−1)V/‖Scal − n(n−1)δ‖₁`.
    pub deficit_scalar: Option<f64>,
}

impl RadiusBounds {
    pub fn min_deficit(&self) -> f64 {
        [
            self.deficit_p,
            self.deficit_inf,
            self.deficit_mean,
            self.deficit_scalar.unwrap_or(f64::INFINITY),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }
}

fn require_hemisphere(surface: &SampledHypersurface, ball: &Ball) -> Result<()> {
    let limit = surface.space().hemisphere_limit();
    if ball.radius < limit {
        Ok(())
    } else {
        Err(Error::HemisphereViolation {
            radius: ball.radius,
            limit,
        })
    }
}

/// Lower bounds for the extrinsic radius and their deficits.
pub fn radius_bound_report(
    surface: &SampledHypersurface,
    curv: &CurvatureData,
    ball: &Ball,
    cfg: &AnalysisConfig,
) -> Result<RadiusBounds> {
    cfg.validate(surface.dim())?;
    curv.require_class(cfg.k)?;
    require_hemisphere(surface, ball)?;
    let space = surface.space();
    let n = surface.dim();
    let w = surface.weights();
    let v = surface.volume();
    let t = space.warping(ball.radius)?.tan;
    let tk = t.powi(cfg.k as i32);
    let hk = curv.mean_field(cfg.k);
    let deficit_p = tk - v.powf(1.0 / cfg.p) / lp_norm(&hk, cfg.p, &w)?;
    let deficit_inf = tk - 1.0 / sup_norm(&hk);
    let deficit_mean = t - 1.0 / curv.sup_mean();
    let deficit_scalar = if n >= 2 && curv.min_mean(2) > curv.positivity_tolerance(2) {
        let nn = (n * (n - 1)) as f64;
        let shifted: Vec<f64> = curv
            .mean_field(2)
            .iter()
            .map(|h2| scalar_curvature(&space, n, *h2) - nn * space.delta())
            .collect();
        Some(t * t - nn * v / lp_norm(&shifted, 1.0, &w)?)
    } else {
        None
    };
    Ok(RadiusBounds {
        k: cfg.k,
        p: cfg.p,
        tan_radius: t,
        deficit_p,
        relative_deficit_p: deficit_p / tk,
        deficit_inf,
        deficit_mean,
        deficit_scalar,
    })
}

/// Outcome of one of the `φ`/`ψ` lemma inequalities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub applicable: bool,
    pub lhs: f64,
    /// `A·C`, or NaN when not applicable.
    pub rhs: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn evaluate(applicable: bool, lhs: f64, rhs: f64) -> Self {
        if applicable {
            Self {
                applicable,
                lhs,
                rhs,
                holds: lhs <= rhs,
            }
        } else {
            Self {
                applicable,
                lhs,
                rhs: f64::NAN,
                holds: true,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PinchingQuantities {
    /// `C = t_δ(R)^k − 1/‖H_k‖_{2p}` at unit volume.
    pub pinching_constant: f64,
    pub phi_l2_sq: f64,
    pub psi_l2_sq: f64,
    pub phi_inf: f64,
    pub psi_inf: f64,
    /// `A₁`, `A₂` (only for `k ≥ 2`).
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub phi_bound: BoundCheck,
    pub psi_bound: BoundCheck,
    /// `max(R − r)` over samples.
    pub annulus_margin: f64,
}

/// Per-sample `φ = s_δ²(R) − s_δ²(r)` and `ψ = c_δ(r)|Zᵀ|`.
pub fn pinching_fields(surface: &SampledHypersurface, radius: f64) -> (Vec<f64>, Vec<f64>) {
    let space = surface.space();
    let s_big = space.sin_d(radius);
    surface
        .samples()
        .par_iter()
        .map(|x| {
            let s = space.sin_d(x.radial.r);
            let phi = s_big * s_big - s * s;
            let psi = space.cos_d(x.radial.r) * x.radial.z_tangent.norm();
            (phi, psi)
        })
        .unzip()
}

/// Measured pinching constant and the `L²` bounds on `φ` and `ψ`.
///
/// The surface must already have unit volume. The bound checks are evaluated
/// for `0 < C < 1`; a `k = 1` configuration is rejected because the bounds
/// are derived for `k ≥ 2` only (see [`pinching_measurements`]).
pub fn pinching_quantities(
    surface: &SampledHypersurface,
    curv: &CurvatureData,
    ball: &Ball,
    cfg: &AnalysisConfig,
) -> Result<PinchingQuantities> {
    if cfg.k < 2 {
        return Err(Error::Unsupported(
            "the L2 bounds on phi and psi are derived for k >= 2 only; use k >= 2".into(),
        ));
    }
    measure(surface, curv, ball, cfg)
}

/// Same as [`pinching_quantities`], but for `k = 1` the constants and bound
/// checks are reported as not applicable instead of rejected.
pub fn pinching_measurements(
    surface: &SampledHypersurface,
    curv: &CurvatureData,
    ball: &Ball,
    cfg: &AnalysisConfig,
) -> Result<PinchingQuantities> {
    measure(surface, curv, ball, cfg)
}

fn measure(
    surface: &SampledHypersurface,
    curv: &CurvatureData,
    ball: &Ball,
    cfg: &AnalysisConfig,
) -> Result<PinchingQuantities> {
    cfg.validate(surface.dim())?;
    let v = surface.volume();
    if (v - 1.0).abs() > UNIT_VOLUME_TOL {
        return Err(Error::Domain(format!(
            "pinching quantities need unit volume, got {v}"
        )));
    }
    curv.require_class(cfg.k)?;
    require_hemisphere(surface, ball)?;
    let space = surface.space();
    let w = surface.weights();
    let k = cfg.k as i32;
    let hk_2p = lp_norm(&curv.mean_field(cfg.k), 2.0 * cfg.p, &w)?;
    let c = space.warping(ball.radius)?.tan.powi(k) - 1.0 / hk_2p;
    let (phi, psi) = pinching_fields(surface, ball.radius);
    let sq = |f: &[f64]| lp_norm(f, 2.0, &w).map(|x| x * x);
    let phi_l2_sq = sq(&phi)?;
    let psi_l2_sq = sq(&psi)?;
    let (a1, a2) = if cfg.k >= 2 {
        let h = curv.sup_mean();
        let a2 = h.powi(2 * k - 2) + 2.0 * h.powi(k - 2);
        let a1 = if space.is_euclidean() {
            let kf = cfg.k as f64;
            hk_2p.powf((2.0 * kf - 4.0) / kf) + 2.0 * hk_2p.powf((kf - 4.0) / kf)
        } else {
            a2 / space.delta()
        };
        (Some(a1), Some(a2))
    } else {
        (None, None)
    };
    let applicable = a1.is_some() && c > 0.0 && c < 1.0;
    let annulus_margin = surface
        .samples()
        .iter()
        .map(|x| ball.radius - x.radial.r)
        .fold(0.0, f64::max);
    Ok(PinchingQuantities {
        pinching_constant: c,
        phi_l2_sq,
        psi_l2_sq,
        phi_inf: sup_norm(&phi),
        psi_inf: sup_norm(&psi),
        a1,
        a2,
        phi_bound: BoundCheck::evaluate(applicable, phi_l2_sq, a1.unwrap_or(f64::NAN) * c),
        psi_bound: BoundCheck::evaluate(applicable, psi_l2_sq, a2.unwrap_or(f64::NAN) * c),
        annulus_margin,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TotalCurvature {
    /// `∫ H_k^{n/k} dv`.
    pub integral: f64,
    /// Volume of the unit `n`-sphere.
    pub omega_n: f64,
    pub margin: f64,
}

/// `∫ H_k^{n/k} − ωₙ` for Euclidean hypersurfaces in the positive class.
pub fn total_curvature_check(
    surface: &SampledHypersurface,
    curv: &CurvatureData,
    k: usize,
) -> Result<TotalCurvature> {
    if !surface.space().is_euclidean() {
        return Err(Error::Unsupported(
            "the total-curvature bound is stated for Euclidean space only".into(),
        ));
    }
    curv.require_class(k)?;
    let n = surface.dim();
    let exponent = n as f64 / k as f64;
    let field: Vec<f64> = curv
        .mean_field(k)
        .iter()
        .map(|h| h.powf(exponent))
        .collect();
    let integral = integrate(&field, &surface.weights());
    let omega_n = unit_sphere_volume(n);
    Ok(TotalCurvature {
        integral,
        omega_n,
        margin: integral - omega_n,
    })
}
