//! Ambient space forms `𝕄ⁿ⁺¹(δ)` with `δ ≥ 0`.
//!
//! Euclidean space (`δ = 0`) stores points in `ℝⁿ⁺¹`. The round sphere of
//! curvature `δ > 0` stores points in `ℝⁿ⁺²` with `|x|² = 1/δ`; tangent vectors
//! at `x` are the vectors orthogonal to `x`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type AmbientPoint = DVector<f64>;
pub type AmbientVector = DVector<f64>;

/// Radii below this are treated as coincident with the base point.
pub const DEGENERATE_RADIUS: f64 = 1e-12;
/// Accepted deviation of `δ|x|²` from one for points of a sphere.
pub const SPHERE_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceForm {
    delta: f64,
    dim: usize,
}

/// Values of the warping functions `s_δ`, `c_δ` and `t_δ` at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Warping {
    pub s: f64,
    pub c: f64,
    pub tan: f64,
}

/// Radial data of a point `x` with respect to a base point `p0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionField {
    /// Geodesic distance `r = d(p0, x)`.
    pub r: f64,
    /// Unit gradient of `r` at `x`.
    pub grad_r: AmbientVector,
    /// Position vector `Z = s_δ(r) ∇r`.
    pub z: AmbientVector,
}

impl SpaceForm {
    /// `dim` is the dimension `n+1` of the space form itself.
    pub fn new(delta: f64, dim: usize) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::Domain(format!(
                "curvature must be finite, got {delta}"
            )));
        }
        if delta < 0.0 {
            return Err(Error::NegativeCurvature(delta));
        }
        if dim < 2 {
            return Err(Error::Dimension(format!("space form dimension {dim} < 2")));
        }
        Ok(Self { delta, dim })
    }

    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::new(0.0, dim)
    }

    pub fn sphere(delta: f64, dim: usize) -> Result<Self> {
        if delta <= 0.0 {
            return Err(Error::Domain(format!(
                "sphere curvature must be positive, got {delta}"
            )));
        }
        Self::new(delta, dim)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_euclidean(&self) -> bool {
        self.delta == 0.0
    }

    /// Length of the coordinate vectors used to store points.
    pub fn embedding_dim(&self) -> usize {
        if self.is_euclidean() {
            self.dim
        } else {
            self.dim + 1
        }
    }

    /// Radius `π/(2√δ)` of an open hemisphere; infinite for Euclidean space.
    pub fn hemisphere_limit(&self) -> f64 {
        if self.is_euclidean() {
            f64::INFINITY
        } else {
            FRAC_PI_2 / self.delta.sqrt()
        }
    }

    /// Same space form with the curvature replaced; used by homotheties.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(delta, self.dim)
    }

    pub fn sin_d(&self, t: f64) -> f64 {
        if self.is_euclidean() {
            t
        } else {
            let k = self.delta.sqrt();
            (k * t).sin() / k
        }
    }

    pub fn cos_d(&self, t: f64) -> f64 {
        if self.is_euclidean() {
            1.0
        } else {
            (self.delta.sqrt() * t).cos()
        }
    }

    pub fn tan_d(&self, t: f64) -> f64 {
        if self.is_euclidean() {
            t
        } else {
            let k = self.delta.sqrt();
            (k * t).tan() / k
        }
    }

    /// Evaluates `(s_δ(t), c_δ(t), t_δ(t))`.
    pub fn warping(&self, t: f64) -> Result<Warping> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!(
                "warping argument must be >= 0, got {t}"
            )));
        }
        if t >= self.hemisphere_limit() {
            return Err(Error::Domain(format!(
                "t_δ undefined at {t} >= π/(2√δ) = {}",
                self.hemisphere_limit()
            )));
        }
        Ok(Warping {
            s: self.sin_d(t),
            c: self.cos_d(t),
            tan: self.tan_d(t),
        })
    }

    /// Checks that `x` is a point of this space form.
    pub fn check_point(&self, x: &AmbientPoint) -> Result<()> {
        if x.len() != self.embedding_dim() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.embedding_dim()
            )));
        }
        if !self.is_euclidean() {
            let dev = (self.delta * x.norm_squared() - 1.0).abs();
            if dev > SPHERE_NORM_TOL {
                return Err(Error::Domain(format!(
                    "point off the sphere: |δ|x|² − 1| = {dev:e}"
                )));
            }
        }
        Ok(())
    }

    /// Rescales a vector onto the sphere `|x|² = 1/δ`; identity for `δ = 0`.
    pub fn normalize_point(&self, x: &AmbientPoint) -> AmbientPoint {
        if self.is_euclidean() {
            x.clone()
        } else {
            x / (x.norm() * self.delta.sqrt())
        }
    }

    pub fn geodesic_distance(&self, p: &AmbientPoint, q: &AmbientPoint) -> f64 {
        if self.is_euclidean() {
            return (p - q).norm();
        }
        // Chord form of arccos(δ⟨p,q⟩); accurate for nearby points as well.
        let k = self.delta.sqrt();
        let half_chord = 0.5 * k * (p - q).norm();
        2.0 * half_chord.clamp(-1.0, 1.0).asin() / k
    }

    /// Distance `r`, gradient `∇̄r` and position vector `Z` at `x` about `p0`.
    pub fn position_field(&self, p0: &AmbientPoint, x: &AmbientPoint) -> Result<PositionField> {
        let r = self.geodesic_distance(p0, x);
        if r < DEGENERATE_RADIUS {
            return Err(Error::Degenerate(format!(
                "point within {r:e} of the base point"
            )));
        }
        if self.is_euclidean() {
            let z = x - p0;
            let grad_r = &z / r;
            return Ok(PositionField { r, grad_r, z });
        }
        let mut z = x * self.cos_d(r) - p0;
        // Z is tangent at x; remove the roundoff component along x.
        let along = z.dot(x) * self.delta;
        z -= x * along;
        let grad_r = &z / self.sin_d(r);
        Ok(PositionField { r, grad_r, z })
    }

    /// Unit initial velocity at `p0` of the geodesic from `p0` through `x`,
    /// together with `r = d(p0, x)` and the unnormalized direction.
    fn direction_at_base(
        &self,
        p0: &AmbientPoint,
        x: &AmbientPoint,
    ) -> Result<(f64, AmbientVector, f64)> {
        let r = self.geodesic_distance(p0, x);
        if r < DEGENERATE_RADIUS {
            return Err(Error::Degenerate(format!(
                "point within {r:e} of the base point"
            )));
        }
        if self.is_euclidean() {
            let w = x - p0;
            let len = w.norm();
            return Ok((r, w / len, len));
        }
        let w = x - p0 * (self.delta * p0.dot(x));
        let len = w.norm();
        Ok((r, w / len, len))
    }

    /// Point at distance `radius` from `p0` on the geodesic ray through `x`.
    pub fn radial_project(
        &self,
        p0: &AmbientPoint,
        radius: f64,
        x: &AmbientPoint,
    ) -> Result<AmbientPoint> {
        let (_, v, _) = self.direction_at_base(p0, x)?;
        Ok(p0 * self.cos_d(radius) + v * self.sin_d(radius))
    }

    /// Ambient Jacobian of [`Self::radial_project`] with respect to `x`.
    pub fn radial_project_jacobian(
        &self,
        p0: &AmbientPoint,
        radius: f64,
        x: &AmbientPoint,
    ) -> Result<DMatrix<f64>> {
        let (_, v, len) = self.direction_at_base(p0, x)?;
        let d = self.embedding_dim();
        let mut proj_v = DMatrix::<f64>::identity(d, d);
        proj_v -= &v * v.transpose();
        let dv = if self.is_euclidean() {
            proj_v / len
        } else {
            let mut proj_p0 = DMatrix::<f64>::identity(d, d);
            proj_p0 -= (p0 * p0.transpose()) * self.delta;
            (proj_v * proj_p0) / len
        };
        Ok(dv * self.sin_d(radius))
    }

    /// Orthonormal basis of the tangent space at `p`, as matrix columns.
    pub fn tangent_basis(&self, p: &AmbientPoint) -> DMatrix<f64> {
        let d = self.embedding_dim();
        if self.is_euclidean() {
            return DMatrix::identity(d, d);
        }
        let unit = p / p.norm();
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d - 1);
        let mut candidates: Vec<usize> = (0..d).collect();
        // Most orthogonal coordinate axes first keeps Gram-Schmidt well conditioned.
        candidates.sort_by(|&a, &b| unit[a].abs().total_cmp(&unit[b].abs()));
        for &axis in &candidates {
            if basis.len() == d - 1 {
                break;
            }
            let mut e = DVector::<f64>::zeros(d);
            e[axis] = 1.0;
            for _ in 0..2 {
                e -= &unit * unit.dot(&e);
                for b in &basis {
                    e -= b * b.dot(&e);
                }
            }
            let len = e.norm();
            if len > 1e-8 {
                basis.push(e / len);
            }
        }
        DMatrix::from_columns(&basis)
    }
}
