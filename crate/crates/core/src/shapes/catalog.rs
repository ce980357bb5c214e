//! Analytic hypersurfaces given as radial graphs over the unit sphere.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_dual::DualNum;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaceform::{AmbientPoint, SpaceForm};

/// Scalar types the charts can be evaluated in (plain floats or dual numbers).
pub trait ChartScalar: DualNum<Primitive = f64> + Copy {}
impl<T: DualNum<Primitive = f64> + Copy> ChartScalar for T {}

/// How one parameter axis is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    /// Polar angle `θ ∈ (0, π)` used directly, Gauss–Legendre in `θ`.
    Angle,
    /// Cosine of the last polar angle, `z ∈ (−1, 1)`, Gauss–Legendre in `z`.
    Cosine,
    /// Azimuth `φ ∈ [0, 2π)`, periodic rule.
    Azimuth,
}

impl AxisKind {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            AxisKind::Angle => (0.0, PI),
            AxisKind::Cosine => (-1.0, 1.0),
            AxisKind::Azimuth => (0.0, 2.0 * PI),
        }
    }

    pub fn is_periodic(self) -> bool {
        self == AxisKind::Azimuth
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeKind {
    RoundSphere {
        center: Vec<f64>,
        radius: f64,
    },
    Ellipsoid {
        center: Vec<f64>,
        semiaxes: Vec<f64>,
    },
    PerturbedSphere {
        center: Vec<f64>,
        radius: f64,
        amplitude: f64,
    },
    GeodesicSphere {
        pole: Vec<f64>,
        radius: f64,
    },
    PerturbedGeodesicSphere {
        pole: Vec<f64>,
        radius: f64,
        amplitude: f64,
    },
}

impl ShapeKind {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeKind::RoundSphere { .. } => "round_sphere",
            ShapeKind::Ellipsoid { .. } => "ellipsoid",
            ShapeKind::PerturbedSphere { .. } => "perturbed_sphere",
            ShapeKind::GeodesicSphere { .. } => "geodesic_sphere",
            ShapeKind::PerturbedGeodesicSphere { .. } => "perturbed_geodesic_sphere",
        }
    }
}

/// Angular profile of the perturbed families: `(3ω_n² − 1)/2`, a zonal
/// degree-two harmonic with range `[−1/2, 1]`.
pub fn perturbation_profile<D: ChartScalar>(direction: &[D]) -> D {
    let last = direction[direction.len() - 1];
    (last * last * 3.0 - 1.0) * 0.5
}

/// Point of the unit sphere `Sⁿ ⊂ ℝⁿ⁺¹` at the given chart parameters.
///
/// Parameters are `(θ₁, …, θ_{n−2}, z, φ)`; the last polar angle enters
/// through its cosine `z`.
pub fn unit_direction<D: ChartScalar>(params: &[D]) -> Vec<D> {
    let n = params.len();
    let z = params[n - 2];
    let phi = params[n - 1];
    let w = (-(z * z) + 1.0).sqrt();
    let mut out = vec![w * phi.cos(), w * phi.sin(), z];
    for theta in params[..n - 2].iter().rev() {
        let s = theta.sin();
        for c in out.iter_mut() {
            *c *= s;
        }
        out.push(theta.cos());
    }
    out
}

/// A closed hypersurface of a space form given by an explicit chart.
#[derive(Debug, Clone, Serialize)]
pub struct ParametricShape {
    #[serde(flatten)]
    kind: ShapeKind,
    /// Intrinsic dimension `n`.
    dim: usize,
    /// Homothety factor applied to every chart value.
    scale: f64,
    /// Curvature of the space form before scaling.
    base_delta: f64,
    #[serde(skip)]
    tangent_frame: DMatrix<f64>,
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::InvalidShape(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

fn check_amplitude(amplitude: f64) -> Result<()> {
    if !(amplitude.abs() < 1.0) {
        return Err(Error::InvalidShape(format!(
            "amplitude must satisfy |t| < 1, got {amplitude}"
        )));
    }
    Ok(())
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidShape(format!(
            "intrinsic dimension must be >= 2, got {dim}"
        )));
    }
    Ok(())
}

impl ParametricShape {
    fn euclidean(kind: ShapeKind, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            kind,
            dim,
            scale: 1.0,
            base_delta: 0.0,
            tangent_frame: DMatrix::identity(dim + 1, dim + 1),
        })
    }

    pub fn round_sphere(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_positive("radius", radius)?;
        let dim = center.len().saturating_sub(1);
        Self::euclidean(ShapeKind::RoundSphere { center, radius }, dim)
    }

    pub fn ellipsoid(center: Vec<f64>, semiaxes: Vec<f64>) -> Result<Self> {
        if center.len() != semiaxes.len() {
            return Err(Error::InvalidShape(format!(
                "center has {} coordinates but {} semi-axes were given",
                center.len(),
                semiaxes.len()
            )));
        }
        for a in &semiaxes {
            check_positive("semi-axis", *a)?;
        }
        let dim = center.len().saturating_sub(1);
        Self::euclidean(ShapeKind::Ellipsoid { center, semiaxes }, dim)
    }

    pub fn perturbed_sphere(center: Vec<f64>, radius: f64, amplitude: f64) -> Result<Self> {
        check_positive("radius", radius)?;
        check_amplitude(amplitude)?;
        let dim = center.len().saturating_sub(1);
        Self::euclidean(
            ShapeKind::PerturbedSphere {
                center,
                radius,
                amplitude,
            },
            dim,
        )
    }

    fn spherical(delta: f64, kind: ShapeKind, pole_len: usize, max_radius: f64) -> Result<Self> {
        let dim = pole_len.saturating_sub(2);
        check_dim(dim)?;
        let space = SpaceForm::sphere(delta, dim + 1)?;
        let (ShapeKind::GeodesicSphere { pole, .. }
        | ShapeKind::PerturbedGeodesicSphere { pole, .. }) = &kind
        else {
            unreachable!("spherical constructor called with a Euclidean shape")
        };
        let p = DVector::from_column_slice(pole);
        let dev = (space.delta() * p.norm_squared() - 1.0).abs();
        if dev > 1e-9 {
            return Err(Error::InvalidShape(format!(
                "pole is not on the sphere of curvature {delta}: |δ|p|² − 1| = {dev:e}"
            )));
        }
        if max_radius >= 2.0 * space.hemisphere_limit() {
            return Err(Error::InvalidShape(format!(
                "geodesic radius {max_radius} reaches the antipode"
            )));
        }
        let p = space.normalize_point(&p);
        let tangent_frame = space.tangent_basis(&p);
        let kind = match kind {
            ShapeKind::GeodesicSphere { radius, .. } => ShapeKind::GeodesicSphere {
                pole: p.as_slice().to_vec(),
                radius,
            },
            ShapeKind::PerturbedGeodesicSphere {
                radius, amplitude, ..
            } => ShapeKind::PerturbedGeodesicSphere {
                pole: p.as_slice().to_vec(),
                radius,
                amplitude,
            },
            other => other,
        };
        Ok(Self {
            kind,
            dim,
            scale: 1.0,
            base_delta: delta,
            tangent_frame,
        })
    }

    /// North pole `(0, …, 0, 1/√δ)` of `𝕊ⁿ⁺¹(δ)`.
    pub fn north_pole(delta: f64, dim: usize) -> Vec<f64> {
        let mut p = vec![0.0; dim + 2];
        p[dim + 1] = 1.0 / delta.sqrt();
        p
    }

    pub fn geodesic_sphere(delta: f64, pole: Vec<f64>, radius: f64) -> Result<Self> {
        check_positive("radius", radius)?;
        let len = pole.len();
        Self::spherical(
            delta,
            ShapeKind::GeodesicSphere { pole, radius },
            len,
            radius,
        )
    }

    pub fn perturbed_geodesic_sphere(
        delta: f64,
        pole: Vec<f64>,
        radius: f64,
        amplitude: f64,
    ) -> Result<Self> {
        check_positive("radius", radius)?;
        check_amplitude(amplitude)?;
        let len = pole.len();
        let max_radius = radius * (1.0 + amplitude.abs());
        Self::spherical(
            delta,
            ShapeKind::PerturbedGeodesicSphere {
                pole,
                radius,
                amplitude,
            },
            len,
            max_radius,
        )
    }

    pub fn kind(&self) -> &ShapeKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn space(&self) -> SpaceForm {
        let delta = self.base_delta / (self.scale * self.scale);
        SpaceForm::new(delta, self.dim + 1).expect("validated at construction")
    }

    /// The same shape after the ambient homothety `x ↦ λx`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.scale *= factor;
        out
    }

    /// Parameter axes of the chart, in order.
    pub fn axes(&self) -> Vec<AxisKind> {
        let mut axes = vec![AxisKind::Angle; self.dim - 2];
        axes.push(AxisKind::Cosine);
        axes.push(AxisKind::Azimuth);
        axes
    }

    /// Star center of the shape: the Euclidean center or the spherical pole.
    pub fn center(&self) -> AmbientPoint {
        let c = match &self.kind {
            ShapeKind::RoundSphere { center, .. }
            | ShapeKind::Ellipsoid { center, .. }
            | ShapeKind::PerturbedSphere { center, .. } => center,
            ShapeKind::GeodesicSphere { pole, .. }
            | ShapeKind::PerturbedGeodesicSphere { pole, .. } => pole,
        };
        DVector::from_column_slice(c) * self.scale
    }

    /// True when the surface is a geodesic sphere about [`Self::center`].
    pub fn is_centered_sphere(&self) -> bool {
        match &self.kind {
            ShapeKind::RoundSphere { .. } | ShapeKind::GeodesicSphere { .. } => true,
            ShapeKind::PerturbedSphere { amplitude, .. }
            | ShapeKind::PerturbedGeodesicSphere { amplitude, .. } => *amplitude == 0.0,
            ShapeKind::Ellipsoid { semiaxes, .. } => semiaxes.iter().all(|a| *a == semiaxes[0]),
        }
    }

    /// Evaluates the chart at `params`.
    pub fn chart<D: ChartScalar>(&self, params: &[D]) -> Vec<D> {
        debug_assert_eq!(params.len(), self.dim);
        let omega = unit_direction(params);
        let lift = |c: &[f64], radial: &dyn Fn(usize, D) -> D| -> Vec<D> {
            omega
                .iter()
                .enumerate()
                .map(|(i, w)| radial(i, *w) + c[i])
                .collect()
        };
        let raw: Vec<D> = match &self.kind {
            ShapeKind::RoundSphere { center, radius } => lift(center, &|_, w| w * *radius),
            ShapeKind::Ellipsoid { center, semiaxes } => lift(center, &|i, w| w * semiaxes[i]),
            ShapeKind::PerturbedSphere {
                center,
                radius,
                amplitude,
            } => {
                let rho = (perturbation_profile(&omega) * *amplitude + 1.0) * *radius;
                lift(center, &|_, w| w * rho)
            }
            ShapeKind::GeodesicSphere { pole, radius } => {
                self.geodesic_graph(pole, D::from(*radius), &omega)
            }
            ShapeKind::PerturbedGeodesicSphere {
                pole,
                radius,
                amplitude,
            } => {
                let rho = (perturbation_profile(&omega) * *amplitude + 1.0) * *radius;
                self.geodesic_graph(pole, rho, &omega)
            }
        };
        raw.into_iter().map(|c| c * self.scale).collect()
    }

    /// `c_δ(ρ) p + s_δ(ρ) E ω` in the unscaled sphere.
    fn geodesic_graph<D: ChartScalar>(&self, pole: &[f64], rho: D, omega: &[D]) -> Vec<D> {
        let k = self.base_delta.sqrt();
        let (sn, cs) = (rho * k).sin_cos();
        let sn = sn * (1.0 / k);
        let e = &self.tangent_frame;
        (0..pole.len())
            .map(|row| {
                let mut tangent = D::from(0.0);
                for (col, w) in omega.iter().enumerate() {
                    tangent += *w * e[(row, col)];
                }
                cs * pole[row] + sn * tangent
            })
            .collect()
    }

    /// Chart at plain float parameters as an ambient point.
    pub fn point(&self, params: &[f64]) -> AmbientPoint {
        DVector::from_vec(self.chart(params))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_is_unit() {
        for params in [
            vec![0.3, 1.0],
            vec![0.7, -0.2, 2.0],
            vec![1.0, 2.0, 0.1, 4.0],
        ] {
            let w = unit_direction(&params);
            assert_eq!(w.len(), params.len() + 1);
            let norm: f64 = w.iter().map(|c| c * c).sum();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn geodesic_sphere_points_lie_on_the_sphere_at_distance_rho() {
        let shape = ParametricShape::geodesic_sphere(4.0, ParametricShape::north_pole(4.0, 2), 0.3)
            .unwrap();
        let space = shape.space();
        let pole = shape.center();
        for params in [[0.1, 0.4], [-0.8, 3.0], [0.99, 6.0]] {
            let x = shape.point(&params);
            space.check_point(&x).unwrap();
            assert!((space.geodesic_distance(&pole, &x) - 0.3).abs() < 1e-14);
        }
    }

    #[test]
    fn scaling_changes_curvature() {
        let shape = ParametricShape::geodesic_sphere(1.0, ParametricShape::north_pole(1.0, 2), 0.5)
            .unwrap();
        let scaled = shape.scaled(2.0);
        assert!((scaled.space().delta() - 0.25).abs() < 1e-15);
        let x = scaled.point(&[0.2, 0.3]);
        scaled.space().check_point(&x).unwrap();
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ParametricShape::round_sphere(vec![0.0, 0.0, 0.0], -1.0).is_err());
        assert!(ParametricShape::round_sphere(vec![0.0, 0.0], 1.0).is_err());
        assert!(ParametricShape::perturbed_sphere(vec![0.0; 3], 1.0, 1.0).is_err());
        assert!(ParametricShape::ellipsoid(vec![0.0; 3], vec![1.0, 2.0]).is_err());
        assert!(ParametricShape::geodesic_sphere(1.0, vec![0.0, 0.0, 0.0, 2.0], 0.5).is_err());
        assert!(ParametricShape::geodesic_sphere(1.0, vec![0.0, 0.0, 0.0, 1.0], 3.5).is_err());
    }
}
