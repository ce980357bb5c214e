//! Quadrature-weighted sampling of parametric hypersurfaces.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_dual::HyperDual64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::catalog::{AxisKind, ParametricShape};
use super::quadrature::Rule;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::spaceform::{AmbientPoint, AmbientVector, SpaceForm};

/// Smallest accepted eigenvalue of the first fundamental form.
pub const MIN_METRIC_EIGENVALUE: f64 = 1e-10;
/// Minimum number of nodes per parameter axis.
pub const MIN_NODES: usize = 8;
/// Identifier of the tensor-product rule written into reports.
pub const QUADRATURE_RULE: &str = "gauss-legendre(polar) x periodic-trapezoid(azimuth)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    /// Exact derivatives of the chart through hyper-dual numbers.
    #[default]
    Analytic,
    /// Central differences with step `ε^{1/3}` times the local axis range.
    FiniteDifference,
}

impl DerivativeMode {
    pub fn name(self) -> &'static str {
        match self {
            DerivativeMode::Analytic => "analytic",
            DerivativeMode::FiniteDifference => "finite_difference",
        }
    }
}

/// Tensor grid description: base nodes per axis, refined `level` times by doubling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    nodes: Vec<usize>,
    level: u32,
    derivatives: DerivativeMode,
}

impl GridSpec {
    pub fn new(nodes: Vec<usize>) -> Result<Self> {
        if let Some(bad) = nodes.iter().find(|&&k| k < MIN_NODES) {
            return Err(Error::InvalidGrid(format!(
                "{bad} nodes on an axis; at least {MIN_NODES} required"
            )));
        }
        Ok(Self {
            nodes,
            level: 0,
            derivatives: DerivativeMode::Analytic,
        })
    }

    /// 64 × 128 for surfaces; 20 nodes per polar axis and 40 in azimuth above.
    pub fn default_for(dim: usize) -> Self {
        let nodes = if dim == 2 {
            vec![64, 128]
        } else {
            let mut v = vec![20; dim - 1];
            v.push(40);
            v
        };
        Self {
            nodes,
            level: 0,
            derivatives: DerivativeMode::Analytic,
        }
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = level;
        self
    }

    pub fn with_derivatives(mut self, mode: DerivativeMode) -> Self {
        self.derivatives = mode;
        self
    }

    /// One refinement step (all axes doubled).
    pub fn refined(&self) -> Self {
        self.clone().with_level(self.level + 1)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn derivatives(&self) -> DerivativeMode {
        self.derivatives
    }

    pub fn base_nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn effective_nodes(&self) -> Vec<usize> {
        self.nodes.iter().map(|k| k << self.level).collect()
    }
}

/// Position, tangent frame and (optionally) second derivatives of a chart.
#[derive(Debug, Clone)]
pub struct LocalGeometry {
    pub position: AmbientPoint,
    /// Columns `∂ᵢx`.
    pub frame: DMatrix<f64>,
    /// `∂ᵢ∂ⱼx`, row-major `n × n`; present for analytic derivatives.
    pub hessian: Option<Vec<AmbientVector>>,
}

/// Radial data about the current base point.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialData {
    pub r: f64,
    pub z: AmbientVector,
    /// Normal component `⟨Z, ν⟩`.
    pub z_normal: f64,
    /// Tangential projection `Zᵀ = Z − ⟨Z,ν⟩ν`.
    pub z_tangent: AmbientVector,
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub params: Vec<f64>,
    pub position: AmbientPoint,
    pub frame: DMatrix<f64>,
    pub hessian: Option<Vec<AmbientVector>>,
    pub metric: DMatrix<f64>,
    pub normal: AmbientVector,
    /// Quadrature weight including `√det g`.
    pub weight: f64,
    pub radial: RadialData,
}

/// A sampled immersed hypersurface; immutable once built apart from the base point.
#[derive(Debug, Clone)]
pub struct SampledHypersurface {
    shape: Arc<ParametricShape>,
    grid: GridSpec,
    samples: Vec<Sample>,
    volume: f64,
    base_point: AmbientPoint,
    grid_spacing: f64,
}

fn axis_rule(kind: AxisKind, nodes: usize) -> Rule {
    let (lo, hi) = kind.bounds();
    match kind {
        AxisKind::Azimuth => Rule::periodic(nodes, hi - lo),
        AxisKind::Angle | AxisKind::Cosine => Rule::gauss_legendre(nodes, lo, hi),
    }
}

fn multi_index(mut flat: usize, counts: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; counts.len()];
    for a in (0..counts.len()).rev() {
        idx[a] = flat % counts[a];
        flat /= counts[a];
    }
    idx
}

fn flat_index(idx: &[usize], counts: &[usize]) -> usize {
    idx.iter().zip(counts).fold(0, |acc, (i, c)| acc * c + i)
}

fn analytic_geometry(shape: &ParametricShape, params: &[f64]) -> LocalGeometry {
    let n = params.len();
    let mut position = None;
    let mut frame_cols: Vec<Option<AmbientVector>> = vec![None; n];
    let mut hessian = vec![DVector::zeros(0); n * n];
    for i in 0..n {
        for j in i..n {
            let duals: Vec<HyperDual64> = params
                .iter()
                .enumerate()
                .map(|(k, &u)| HyperDual64::new(u, f64::from(k == i), f64::from(k == j), 0.0))
                .collect();
            let out = shape.chart(&duals);
            if position.is_none() {
                position = Some(DVector::from_iterator(out.len(), out.iter().map(|d| d.re)));
            }
            if frame_cols[i].is_none() {
                frame_cols[i] = Some(DVector::from_iterator(
                    out.len(),
                    out.iter().map(|d| d.eps1),
                ));
            }
            if frame_cols[j].is_none() {
                frame_cols[j] = Some(DVector::from_iterator(
                    out.len(),
                    out.iter().map(|d| d.eps2),
                ));
            }
            let second = DVector::from_iterator(out.len(), out.iter().map(|d| d.eps1eps2));
            hessian[i * n + j] = second.clone();
            hessian[j * n + i] = second;
        }
    }
    let cols: Vec<AmbientVector> = frame_cols
        .into_iter()
        .map(|c| c.expect("every axis visited"))
        .collect();
    LocalGeometry {
        position: position.expect("n >= 2"),
        frame: DMatrix::from_columns(&cols),
        hessian: Some(hessian),
    }
}

/// Central-difference step for one axis.
///
/// Non-periodic axes use the distance to the nearer end of the box as the
/// local range, so the stencil never straddles a chart singularity.
pub(crate) fn fd_step(kind: AxisKind, u: f64) -> f64 {
    let (lo, hi) = kind.bounds();
    let range = if kind.is_periodic() {
        hi - lo
    } else {
        (hi - lo).min(u - lo).min(hi - u)
    };
    f64::EPSILON.cbrt() * range
}

fn fd_geometry(shape: &ParametricShape, params: &[f64]) -> LocalGeometry {
    let axes = shape.axes();
    let position = shape.point(params);
    let cols: Vec<AmbientVector> = axes
        .iter()
        .enumerate()
        .map(|(i, &kind)| {
            let h = fd_step(kind, params[i]);
            let mut up = params.to_vec();
            let mut down = params.to_vec();
            up[i] += h;
            down[i] -= h;
            (shape.point(&up) - shape.point(&down)) / (2.0 * h)
        })
        .collect();
    LocalGeometry {
        position,
        frame: DMatrix::from_columns(&cols),
        hessian: None,
    }
}

/// Chart derivatives at `params` in the requested mode.
pub fn local_geometry(
    shape: &ParametricShape,
    params: &[f64],
    mode: DerivativeMode,
) -> LocalGeometry {
    match mode {
        DerivativeMode::Analytic => analytic_geometry(shape, params),
        DerivativeMode::FiniteDifference => fd_geometry(shape, params),
    }
}

/// Unit vector orthogonal to the frame (and to `x` on the sphere), before orientation.
fn raw_normal(
    space: &SpaceForm,
    position: &AmbientPoint,
    frame: &DMatrix<f64>,
) -> Result<AmbientVector> {
    let d = space.embedding_dim();
    let mut basis: Vec<AmbientVector> = Vec::with_capacity(d);
    let mut constraints: Vec<AmbientVector> = frame.column_iter().map(|c| c.into_owned()).collect();
    if !space.is_euclidean() {
        constraints.push(position.clone());
    }
    for c in constraints {
        let mut e = c;
        for _ in 0..2 {
            for b in &basis {
                e -= b * b.dot(&e);
            }
        }
        let len = e.norm();
        if !(len > 0.0) {
            return Err(Error::Degenerate("tangent frame is rank deficient".into()));
        }
        basis.push(e / len);
    }
    let mut best: Option<AmbientVector> = None;
    for axis in 0..d {
        let mut e = DVector::<f64>::zeros(d);
        e[axis] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                e -= b * b.dot(&e);
            }
        }
        if best.as_ref().is_none_or(|b| e.norm() > b.norm()) {
            best = Some(e);
        }
    }
    let nu = best.expect("embedding dimension >= 1");
    let len = nu.norm();
    Ok(nu / len)
}

/// Orientation sign of `(x?, ∂₁x, …, ∂ₙx, ν)` as an ambient basis.
fn orientation(
    space: &SpaceForm,
    position: &AmbientPoint,
    frame: &DMatrix<f64>,
    normal: &AmbientVector,
) -> f64 {
    let mut cols: Vec<AmbientVector> = Vec::new();
    if !space.is_euclidean() {
        cols.push(position.clone());
    }
    cols.extend(frame.column_iter().map(|c| c.into_owned()));
    cols.push(normal.clone());
    DMatrix::from_columns(&cols).determinant().signum()
}

fn metric_of(frame: &DMatrix<f64>) -> DMatrix<f64> {
    let g = frame.transpose() * frame;
    (&g + g.transpose()) * 0.5
}

pub(crate) fn radial_data(
    space: &SpaceForm,
    p0: &AmbientPoint,
    x: &AmbientPoint,
    normal: &AmbientVector,
) -> Result<RadialData> {
    let pf = space.position_field(p0, x)?;
    let z_normal = pf.z.dot(normal);
    let z_tangent = &pf.z - normal * z_normal;
    Ok(RadialData {
        r: pf.r,
        z: pf.z,
        z_normal,
        z_tangent,
    })
}

impl SampledHypersurface {
    pub fn shape(&self) -> &ParametricShape {
        &self.shape
    }

    pub fn space(&self) -> SpaceForm {
        self.shape.space()
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Total volume `V = Σ w`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn weights(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.weight).collect()
    }

    pub fn positions(&self) -> Vec<AmbientPoint> {
        self.samples.iter().map(|s| s.position.clone()).collect()
    }

    pub fn base_point(&self) -> &AmbientPoint {
        &self.base_point
    }

    /// Largest distance between grid neighbours.
    pub fn grid_spacing(&self) -> f64 {
        self.grid_spacing
    }

    /// Moves the base point and recomputes `r`, `Z` and `Zᵀ` at every sample.
    pub fn set_base_point(&mut self, p0: AmbientPoint) -> Result<()> {
        let space = self.space();
        space.check_point(&p0)?;
        let radial: Vec<RadialData> = self
            .samples
            .par_iter()
            .map(|s| radial_data(&space, &p0, &s.position, &s.normal))
            .collect::<Result<_>>()?;
        for (s, r) in self.samples.iter_mut().zip(radial) {
            s.radial = r;
        }
        self.base_point = p0;
        Ok(())
    }

    /// Image under the ambient homothety `x ↦ λx` (the space form curvature becomes `δ/λ²`).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::Domain(format!(
                "homothety factor must be positive, got {factor}"
            )));
        }
        let shape = Arc::new(self.shape.scaled(factor));
        let n = shape.dim() as i32;
        let samples = self
            .samples
            .iter()
            .map(|s| Sample {
                params: s.params.clone(),
                position: &s.position * factor,
                frame: &s.frame * factor,
                hessian: s
                    .hessian
                    .as_ref()
                    .map(|h| h.iter().map(|v| v * factor).collect()),
                metric: &s.metric * (factor * factor),
                normal: s.normal.clone(),
                weight: s.weight * factor.powi(n),
                radial: RadialData {
                    r: s.radial.r * factor,
                    z: &s.radial.z * factor,
                    z_normal: s.radial.z_normal * factor,
                    z_tangent: &s.radial.z_tangent * factor,
                },
            })
            .collect::<Vec<_>>();
        let weights: Vec<f64> = samples.iter().map(|s| s.weight).collect();
        Ok(Self {
            shape,
            grid: self.grid.clone(),
            samples,
            volume: pairwise_sum(&weights),
            base_point: &self.base_point * factor,
            grid_spacing: self.grid_spacing * factor,
        })
    }
}

/// Samples `shape` on the tensor grid described by `grid`.
pub fn sample_shape(shape: &ParametricShape, grid: &GridSpec) -> Result<SampledHypersurface> {
    let n = shape.dim();
    let axes = shape.axes();
    if grid.base_nodes().len() != n {
        return Err(Error::InvalidGrid(format!(
            "grid has {} axes, shape needs {n}",
            grid.base_nodes().len()
        )));
    }
    let counts = grid.effective_nodes();
    let rules: Vec<Rule> = axes
        .iter()
        .zip(&counts)
        .map(|(&k, &c)| axis_rule(k, c))
        .collect();
    let total: usize = counts.iter().product();
    let space = shape.space();
    let center = shape.center();
    let mode = grid.derivatives();

    // Orientation sign fixed once from the first node, then applied everywhere.
    let first_params: Vec<f64> = rules.iter().map(|r| r.nodes[0]).collect();
    let first = local_geometry(shape, &first_params, mode);
    let first_normal = raw_normal(&space, &first.position, &first.frame)?;
    let outward = space
        .position_field(&center, &first.position)?
        .z
        .dot(&first_normal)
        .signum();
    let reference_sign =
        outward * orientation(&space, &first.position, &first.frame, &first_normal);

    let samples: Vec<Sample> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let idx = multi_index(flat, &counts);
            let params: Vec<f64> = idx.iter().zip(&rules).map(|(&i, r)| r.nodes[i]).collect();
            let rule_weight: f64 = idx.iter().zip(&rules).map(|(&i, r)| r.weights[i]).product();
            let geom = local_geometry(shape, &params, mode);
            if geom
                .position
                .iter()
                .chain(geom.frame.iter())
                .any(|v| !v.is_finite())
            {
                return Err(Error::NonFinite {
                    quantity: "chart derivative",
                    index: flat,
                });
            }
            let metric = metric_of(&geom.frame);
            let min_eig = metric.clone().symmetric_eigenvalues().min();
            if !(min_eig > MIN_METRIC_EIGENVALUE) {
                return Err(Error::Immersion {
                    params,
                    min_eigenvalue: min_eig,
                });
            }
            let mut normal = raw_normal(&space, &geom.position, &geom.frame)?;
            if orientation(&space, &geom.position, &geom.frame, &normal) != reference_sign {
                normal = -normal;
            }
            let weight = rule_weight * metric.determinant().sqrt();
            let radial = radial_data(&space, &center, &geom.position, &normal)?;
            Ok(Sample {
                params,
                position: geom.position,
                frame: geom.frame,
                hessian: geom.hessian,
                metric,
                normal,
                weight,
                radial,
            })
        })
        .collect::<Result<_>>()?;

    let spacing = (0..total)
        .into_par_iter()
        .map(|flat| {
            let idx = multi_index(flat, &counts);
            let mut worst: f64 = 0.0;
            for (a, kind) in axes.iter().enumerate() {
                let mut next = idx.clone();
                if idx[a] + 1 < counts[a] {
                    next[a] += 1;
                } else if kind.is_periodic() {
                    next[a] = 0;
                } else {
                    continue;
                }
                let other = &samples[flat_index(&next, &counts)].position;
                worst = worst.max(space.geodesic_distance(&samples[flat].position, other));
            }
            worst
        })
        .reduce(|| 0.0, f64::max);

    let weights: Vec<f64> = samples.iter().map(|s| s.weight).collect();
    Ok(SampledHypersurface {
        shape: Arc::new(shape.clone()),
        grid: grid.clone(),
        volume: pairwise_sum(&weights),
        samples,
        base_point: center,
        grid_spacing: spacing,
    })
}

/// Unit normal at arbitrary parameters, oriented like the samples of `surface`.
pub(crate) fn oriented_normal(
    surface: &SampledHypersurface,
    params: &[f64],
    mode: DerivativeMode,
) -> Result<AmbientVector> {
    let space = surface.space();
    let geom = local_geometry(surface.shape(), params, mode);
    let nu = raw_normal(&space, &geom.position, &geom.frame)?;
    let reference = &surface.samples()[0];
    let ref_sign = orientation(
        &space,
        &reference.position,
        &reference.frame,
        &reference.normal,
    );
    if orientation(&space, &geom.position, &geom.frame, &nu) == ref_sign {
        Ok(nu)
    } else {
        Ok(-nu)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, PI};

    use super::*;

    fn unit_sphere() -> ParametricShape {
        ParametricShape::round_sphere(vec![0.0, 0.0, 0.0], 1.0).unwrap()
    }

    #[test]
    fn unit_sphere_area() {
        let s = sample_shape(&unit_sphere(), &GridSpec::default_for(2)).unwrap();
        assert_eq!(s.len(), 64 * 128);
        assert!((s.volume() / (4.0 * PI) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn geodesic_sphere_area() {
        let shape =
            ParametricShape::geodesic_sphere(1.0, ParametricShape::north_pole(1.0, 2), FRAC_PI_4)
                .unwrap();
        let s = sample_shape(&shape, &GridSpec::default_for(2)).unwrap();
        assert!((s.volume() / (2.0 * PI) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ellipsoid_area_self_convergence() {
        let shape = ParametricShape::ellipsoid(vec![0.0; 3], vec![2.0, 1.0, 1.0]).unwrap();
        let grid = GridSpec::default_for(2);
        let coarse = sample_shape(&shape, &grid).unwrap().volume();
        let fine = sample_shape(&shape, &grid.refined().refined())
            .unwrap()
            .volume();
        assert!((coarse / fine - 1.0).abs() < 1e-5);
        // prolate spheroid a=2, b=1: 2πb²(1 + a/(b e) asin e)
        let e = (1.0f64 - 0.25).sqrt();
        let exact = 2.0 * PI * (1.0 + 2.0 / e * e.asin());
        assert!((fine / exact - 1.0).abs() < 1e-10);
    }

    #[test]
    fn three_sphere_volume() {
        let shape = ParametricShape::round_sphere(vec![0.0; 4], 1.5).unwrap();
        let s = sample_shape(&shape, &GridSpec::default_for(3)).unwrap();
        let exact = 2.0 * PI * PI * 1.5f64.powi(3);
        assert!((s.volume() / exact - 1.0).abs() < 1e-8);
    }

    #[test]
    fn normals_are_unit_orthogonal_and_outward() {
        let shapes = vec![
            unit_sphere(),
            ParametricShape::ellipsoid(vec![0.5, -1.0, 0.2], vec![2.0, 1.0, 0.7]).unwrap(),
            ParametricShape::perturbed_sphere(vec![0.0; 3], 1.0, 0.3).unwrap(),
            ParametricShape::perturbed_geodesic_sphere(
                1.0,
                ParametricShape::north_pole(1.0, 2),
                0.6,
                0.2,
            )
            .unwrap(),
            ParametricShape::ellipsoid(vec![0.0; 4], vec![1.0, 1.3, 0.8, 1.1]).unwrap(),
        ];
        for shape in shapes {
            let grid =
                GridSpec::new(vec![12; shape.dim() - 1].into_iter().chain([24]).collect()).unwrap();
            let s = sample_shape(&shape, &grid).unwrap();
            let space = s.space();
            for sample in s.samples() {
                assert!((sample.normal.norm() - 1.0).abs() < 1e-10);
                for col in sample.frame.column_iter() {
                    assert!(sample.normal.dot(&col).abs() < 1e-8 * col.norm());
                }
                if !space.is_euclidean() {
                    assert!(sample.normal.dot(&sample.position).abs() < 1e-12);
                }
                assert!(sample.radial.z_normal > 0.0, "{} not outward", shape.name());
                let split = sample.radial.z_tangent.norm_squared() + sample.radial.z_normal.powi(2);
                assert!((split - space.sin_d(sample.radial.r).powi(2)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn finite_difference_frames_match_analytic() {
        let shapes = vec![
            ParametricShape::ellipsoid(vec![0.0; 3], vec![2.0, 1.0, 1.0]).unwrap(),
            ParametricShape::perturbed_sphere(vec![0.0; 3], 1.0, 0.2).unwrap(),
            ParametricShape::perturbed_geodesic_sphere(
                2.0,
                ParametricShape::north_pole(2.0, 2),
                0.4,
                0.1,
            )
            .unwrap(),
        ];
        for shape in shapes {
            let grid = GridSpec::default_for(2);
            let a = sample_shape(&shape, &grid).unwrap();
            let f = sample_shape(
                &shape,
                &grid
                    .clone()
                    .with_derivatives(DerivativeMode::FiniteDifference),
            )
            .unwrap();
            for (sa, sf) in a.samples().iter().zip(f.samples()) {
                let rel = (&sa.frame - &sf.frame).norm() / sa.frame.norm();
                assert!(rel < 1e-6, "{}: {rel}", shape.name());
            }
        }
    }

    #[test]
    fn rejects_small_grids() {
        assert!(GridSpec::new(vec![4, 128]).is_err());
        let shape = unit_sphere();
        assert!(sample_shape(&shape, &GridSpec::new(vec![8, 8, 8]).unwrap()).is_err());
    }

    #[test]
    fn scaling_rescales_volume() {
        let s = sample_shape(&unit_sphere(), &GridSpec::new(vec![16, 32]).unwrap()).unwrap();
        let t = s.scaled(2.0).unwrap();
        assert!((t.volume() / s.volume() - 4.0).abs() < 1e-14);
    }
}
