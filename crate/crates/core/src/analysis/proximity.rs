//! Closeness of the surface to its enclosing sphere: annulus and covering
//! predicates, Hausdorff bracket, and the distortion of the radial projection.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::bounds::pinching_fields;
use super::norms::sup_norm;
use crate::enclosing::Ball;
use crate::error::{Error, Result};
use crate::shapes::SampledHypersurface;
use crate::spaceform::AmbientPoint;

/// Minimum number of test points on the enclosing sphere.
pub const MIN_TEST_POINTS: usize = 2000;
/// Radial projection is undefined this close to the base point.
pub const MIN_PROJECTION_RADIUS: f64 = 1e-6;
/// Absolute slack for roundoff in the pointwise distortion inequality.
pub const DISTORTION_ROUNDOFF: f64 = 1e-10;

/// Quasi-uniform unit vectors of `Sⁿ ⊂ ℝⁿ⁺¹`, at least `min_count` of them.
///
/// A Fibonacci lattice for `n = 2`; otherwise cell centers of a lattice on the
/// faces of the cube `[−1, 1]ⁿ⁺¹`, projected radially.
pub fn sphere_lattice(n: usize, min_count: usize) -> Vec<DVector<f64>> {
    if n == 2 {
        let golden = PI * (3.0 - 5f64.sqrt());
        return (0..min_count)
            .map(|i| {
                let z = 1.0 - (2 * i + 1) as f64 / min_count as f64;
                let w = (1.0 - z * z).sqrt();
                let a = golden * i as f64;
                DVector::from_vec(vec![w * a.cos(), w * a.sin(), z])
            })
            .collect();
    }
    let d = n + 1;
    let faces = 2 * d;
    let mut m = 1usize;
    while faces * m.pow(n as u32) < min_count {
        m += 1;
    }
    let mut out = Vec::with_capacity(faces * m.pow(n as u32));
    for axis in 0..d {
        for sign in [1.0, -1.0] {
            for cell in 0..m.pow(n as u32) {
                let mut rest = cell;
                let mut v = DVector::zeros(d);
                v[axis] = sign;
                for c in (0..d).filter(|&c| c != axis) {
                    let i = rest % m;
                    rest /= m;
                    v[c] = -1.0 + (2 * i + 1) as f64 / m as f64;
                }
                out.push(v.normalize());
            }
        }
    }
    out
}

/// Test points on the geodesic sphere `S(p₀, R)`.
pub fn boundary_test_points(
    surface: &SampledHypersurface,
    ball: &Ball,
    min_count: usize,
) -> Vec<AmbientPoint> {
    let space = surface.space();
    let dirs = sphere_lattice(surface.dim(), min_count);
    if space.is_euclidean() {
        return dirs
            .iter()
            .map(|w| &ball.center + w * ball.radius)
            .collect();
    }
    let frame: DMatrix<f64> = space.tangent_basis(&ball.center);
    let (s, c) = (space.sin_d(ball.radius), space.cos_d(ball.radius));
    dirs.iter()
        .map(|w| &ball.center * c + (&frame * w) * s)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HausdorffBracket {
    /// `max(R − min r, covering radius)` on the samples.
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub grid_spacing: f64,
    /// Largest nearest-neighbour distance among the test points.
    pub test_spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProximityPredicates {
    pub epsilon: f64,
    pub min_r: f64,
    /// `min r ≥ R − ε`.
    pub annulus_ok: bool,
    /// Largest distance from a test point of `S(p₀, R)` to the nearest sample.
    pub covering_radius: f64,
    /// Every test point has a sample within `ε`.
    pub covering_ok: bool,
    pub test_points: usize,
    pub hausdorff: HausdorffBracket,
}

impl ProximityPredicates {
    /// Smallest `ε` for which both predicates hold on this sample set.
    pub fn min_passing_epsilon(&self) -> f64 {
        self.hausdorff.estimate
    }
}

fn nearest_distance(
    space: &crate::spaceform::SpaceForm,
    x: &AmbientPoint,
    set: &[AmbientPoint],
    skip: Option<usize>,
) -> f64 {
    set.iter()
        .enumerate()
        .filter(|(j, _)| Some(*j) != skip)
        .map(|(_, y)| space.geodesic_distance(x, y))
        .fold(f64::INFINITY, f64::min)
}

/// Annulus and covering predicates with threshold `epsilon`.
pub fn proximity_predicates(
    surface: &SampledHypersurface,
    ball: &Ball,
    epsilon: f64,
) -> Result<ProximityPredicates> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let space = surface.space();
    let positions = surface.positions();
    let tests = boundary_test_points(surface, ball, MIN_TEST_POINTS);
    let covering_radius = tests
        .par_iter()
        .map(|t| nearest_distance(&space, t, &positions, None))
        .reduce(|| 0.0, f64::max);
    let test_spacing = (0..tests.len())
        .into_par_iter()
        .map(|i| nearest_distance(&space, &tests[i], &tests, Some(i)))
        .reduce(|| 0.0, f64::max);
    let min_r = surface
        .samples()
        .iter()
        .map(|s| s.radial.r)
        .fold(f64::INFINITY, f64::min);
    let radial_gap = (ball.radius - min_r).max(0.0);
    let h = surface.grid_spacing();
    let hausdorff = HausdorffBracket {
        estimate: radial_gap.max(covering_radius),
        lower: radial_gap.max(covering_radius - h),
        upper: (radial_gap + h).max(covering_radius + test_spacing),
        grid_spacing: h,
        test_spacing,
    };
    Ok(ProximityPredicates {
        epsilon,
        min_r,
        annulus_ok: min_r >= ball.radius - epsilon,
        covering_radius,
        covering_ok: covering_radius <= epsilon,
        test_points: tests.len(),
        hausdorff,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiIsometrySample {
    /// `F(x)`.
    pub image: Vec<f64>,
    /// `|dF(u)|²` along an orthonormal eigenbasis `u` of `T_xM`.
    pub stretch: Vec<f64>,
    /// `max_u ||dF(u)|² − 1|` over unit `u`.
    pub distortion: f64,
    /// Right-hand side of the pointwise distortion bound.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiIsometryReport {
    pub samples: Vec<QuasiIsometrySample>,
    pub max_distortion: f64,
    /// `max(distortion − bound)` over samples.
    pub max_excess: f64,
    pub bound_holds: bool,
    /// `max |d(p₀, F(x)) − R|`.
    pub max_sphere_deviation: f64,
    pub psi_inf: f64,
}

impl QuasiIsometryReport {
    pub fn theta_ok(&self, theta: f64) -> bool {
        self.max_distortion <= theta
    }
}

/// Distortion of the radial projection `F` onto `S(p₀, R)`.
pub fn quasi_isometry_report(
    surface: &SampledHypersurface,
    ball: &Ball,
) -> Result<QuasiIsometryReport> {
    let space = surface.space();
    let min_r = surface
        .samples()
        .iter()
        .map(|s| s.radial.r)
        .fold(f64::INFINITY, f64::min);
    if !(min_r > MIN_PROJECTION_RADIUS) {
        return Err(Error::Degenerate(format!(
            "surface passes within {min_r:e} of the center"
        )));
    }
    let (_, psi) = pinching_fields(surface, ball.radius);
    let psi_inf = sup_norm(&psi);
    let s_big = space.sin_d(ball.radius);
    let p0 = &ball.center;
    let samples: Vec<QuasiIsometrySample> = surface
        .samples()
        .par_iter()
        .enumerate()
        .map(|(index, x)| {
            let image = space.radial_project(p0, ball.radius, &x.position)?;
            let jac = space.radial_project_jacobian(p0, ball.radius, &x.position)?;
            let df = jac * &x.frame;
            let q = df.transpose() * &df;
            let eig = x.metric.clone().symmetric_eigen();
            let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
            let g_inv_sqrt = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
            let q_orth = &g_inv_sqrt * q * &g_inv_sqrt;
            let q_orth = (&q_orth + q_orth.transpose()) * 0.5;
            let mut stretch: Vec<f64> = q_orth.symmetric_eigenvalues().iter().copied().collect();
            stretch.sort_by(f64::total_cmp);
            let distortion = stretch.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max);
            let (s, c) = (space.sin_d(x.radial.r), space.cos_d(x.radial.r));
            let bound =
                (s_big * s_big - s * s).abs() / (s * s) + s_big * s_big / (c * s * s * s) * psi_inf;
            if !distortion.is_finite() || !bound.is_finite() {
                return Err(Error::NonFinite {
                    quantity: "projection distortion",
                    index,
                });
            }
            Ok(QuasiIsometrySample {
                image: image.iter().copied().collect(),
                stretch,
                distortion,
                bound,
            })
        })
        .collect::<Result<_>>()?;
    let max_distortion = samples.iter().map(|s| s.distortion).fold(0.0, f64::max);
    let max_excess = samples
        .iter()
        .map(|s| s.distortion - s.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_sphere_deviation = samples
        .iter()
        .map(|s| {
            (space.geodesic_distance(p0, &DVector::from_column_slice(&s.image)) - ball.radius).abs()
        })
        .fold(0.0, f64::max);
    Ok(QuasiIsometryReport {
        samples,
        max_distortion,
        max_excess,
        bound_holds: max_excess <= DISTORTION_ROUNDOFF,
        max_sphere_deviation,
        psi_inf,
    })
}
