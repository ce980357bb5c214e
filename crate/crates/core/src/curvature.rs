//! Second fundamental form, higher-order mean curvatures and Newton tensors.
//!
//! Conventions: `ν` is the outward unit normal and `B(X, Y) = ⟨∇̄_X ν, Y⟩`, so a
//! round sphere of radius `ρ` has all principal curvatures equal to `1/ρ`.
//! The normalized mean curvatures are `H_k = σ_k(κ) / C(n, k)` with `H₀ = 1`
//! and `H_{n+1} = 0`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::binomial;
use crate::shapes::{
    fd_step, local_geometry, oriented_normal, DerivativeMode, SampledHypersurface,
};
use crate::spaceform::SpaceForm;

/// Relative tolerance used to decide the sign of `H_j`.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Elementary symmetric polynomials `σ₀ … σₙ` of `values`.
///
/// Expands `∏(1 + s κᵢ)` one factor at a time.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut sigma = vec![0.0; n + 1];
    sigma[0] = 1.0;
    for (m, &k) in values.iter().enumerate() {
        for j in (1..=m + 1).rev() {
            sigma[j] += k * sigma[j - 1];
        }
    }
    sigma
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanCurvatures {
    /// `σ₀ … σₙ`.
    pub sigma: Vec<f64>,
    /// `H₀ … H_{n+1}`.
    pub normalized: Vec<f64>,
}

impl MeanCurvatures {
    pub fn h(&self, k: usize) -> f64 {
        self.normalized.get(k).copied().unwrap_or(0.0)
    }
}

pub fn mean_curvatures(kappa: &[f64]) -> MeanCurvatures {
    let n = kappa.len();
    let sigma = elementary_symmetric(kappa);
    let mut normalized: Vec<f64> = sigma
        .iter()
        .enumerate()
        .map(|(k, s)| s / binomial(n, k))
        .collect();
    normalized.push(0.0);
    MeanCurvatures { sigma, normalized }
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1.0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Generalized Kronecker symbol `ε(i₁…i_k; j₁…j_k)`.
fn kronecker_symbol(upper: &[usize], lower: &[usize]) -> f64 {
    let k = upper.len();
    for a in 0..k {
        for b in a + 1..k {
            if upper[a] == upper[b] {
                return 0.0;
            }
        }
    }
    let mut perm = Vec::with_capacity(k);
    for u in upper {
        match lower.iter().position(|l| l == u) {
            Some(p) => perm.push(p),
            None => return 0.0,
        }
    }
    if lower.len() != k {
        return 0.0;
    }
    // lower has distinct entries whenever it is a rearrangement of upper
    permutation_sign(&perm)
}

/// `H_k` from the permutation-symbol sum over index tuples,
/// `(1/k!) C(n,k)⁻¹ Σ ε(i;j) B_{i₁j₁}⋯B_{i_kj_k}`, for `n ≤ 4`.
///
/// `second_form` must be expressed in an orthonormal frame.
pub fn permutation_symbol_hk(second_form: &DMatrix<f64>, k: usize) -> Result<f64> {
    let n = second_form.nrows();
    if n > 4 || second_form.ncols() != n {
        return Err(Error::Dimension(format!(
            "permutation-symbol oracle needs a square matrix of size <= 4, got {n}"
        )));
    }
    if k == 0 {
        return Ok(1.0);
    }
    if k > n {
        return Ok(0.0);
    }
    let tuples: Vec<Vec<usize>> = (0..n.pow(k as u32))
        .map(|mut t| {
            let mut v = vec![0; k];
            for slot in v.iter_mut() {
                *slot = t % n;
                t /= n;
            }
            v
        })
        .collect();
    let mut total = 0.0;
    for upper in &tuples {
        for lower in &tuples {
            let eps = kronecker_symbol(upper, lower);
            if eps == 0.0 {
                continue;
            }
            let prod: f64 = upper
                .iter()
                .zip(lower)
                .map(|(&i, &j)| second_form[(i, j)])
                .product();
            total += eps * prod;
        }
    }
    let k_factorial: f64 = (1..=k).map(|i| i as f64).product();
    Ok(total / (k_factorial * binomial(n, k)))
}

/// Traces of the Newton tensors for `k = 0 … n−1`, by two routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewtonTraces {
    /// `tr T_k = m(k) H_k`.
    pub trace_identity: Vec<f64>,
    /// `H_{T_k} = m(k) H_{k+1}`.
    pub contraction_identity: Vec<f64>,
    /// `tr P_k` from `P₀ = Id`, `P_k = σ_k Id − S P_{k−1}`.
    pub trace_recursion: Vec<f64>,
    /// `tr(S P_k)` from the same recursion.
    pub contraction_recursion: Vec<f64>,
}

impl NewtonTraces {
    /// Largest disagreement between the two routes.
    pub fn discrepancy(&self) -> f64 {
        let pairs = self.trace_identity.iter().zip(&self.trace_recursion).chain(
            self.contraction_identity
                .iter()
                .zip(&self.contraction_recursion),
        );
        pairs.map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `m(k) = (n − k) C(n, k)`.
pub fn newton_normalization(n: usize, k: usize) -> f64 {
    (n as f64 - k as f64) * binomial(n, k)
}

/// Newton-tensor traces for a symmetric shape operator in an orthonormal frame.
pub fn newton_traces(shape_operator: &DMatrix<f64>) -> NewtonTraces {
    let n = shape_operator.nrows();
    let eig = shape_operator.clone().symmetric_eigenvalues();
    let mc = mean_curvatures(eig.as_slice());
    let mut out = NewtonTraces {
        trace_identity: Vec::with_capacity(n),
        contraction_identity: Vec::with_capacity(n),
        trace_recursion: Vec::with_capacity(n),
        contraction_recursion: Vec::with_capacity(n),
    };
    // σ_k for the recursion comes from the traces themselves (Newton's identities)
    // so that this route never touches the eigenvalues.
    let mut p = DMatrix::<f64>::identity(n, n);
    for k in 0..n {
        let m = newton_normalization(n, k);
        out.trace_identity.push(m * mc.h(k));
        out.contraction_identity.push(m * mc.h(k + 1));
        if k > 0 {
            let sp = shape_operator * &p;
            let sigma_k = sp.trace() / k as f64;
            p = DMatrix::identity(n, n) * sigma_k - sp;
        }
        out.trace_recursion.push(p.trace());
        out.contraction_recursion
            .push((shape_operator * &p).trace());
    }
    out
}

/// Newton traces for a diagonal shape operator `diag(κ)`.
pub fn newton_traces_from_curvatures(kappa: &[f64]) -> NewtonTraces {
    newton_traces(&DMatrix::from_diagonal(&DVector::from_column_slice(kappa)))
}

/// `Scal = n(n−1)(δ + H₂)`.
pub fn scalar_curvature(space: &SpaceForm, n: usize, h2: f64) -> f64 {
    let nn = n as f64;
    nn * (nn - 1.0) * (space.delta() + h2)
}

/// Curvature quantities at one sample.
#[derive(Debug, Clone)]
pub struct PointCurvature {
    /// `B_ij` in the coordinate frame.
    pub second_form: DMatrix<f64>,
    /// Shape operator `g^{-1/2} B g^{-1/2}` in an orthonormal frame.
    pub shape_operator: DMatrix<f64>,
    /// Principal curvatures, ascending.
    pub principal: Vec<f64>,
    pub mean: MeanCurvatures,
    pub newton: NewtonTraces,
}

impl PointCurvature {
    fn from_forms(metric: &DMatrix<f64>, second_form: DMatrix<f64>) -> Self {
        let eig = metric.clone().symmetric_eigen();
        let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
        let g_inv_sqrt = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
        let s = &g_inv_sqrt * &second_form * &g_inv_sqrt;
        let shape_operator = (&s + s.transpose()) * 0.5;
        let mut principal: Vec<f64> = shape_operator
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        principal.sort_by(f64::total_cmp);
        let mean = mean_curvatures(&principal);
        let newton = newton_traces(&shape_operator);
        Self {
            second_form,
            shape_operator,
            principal,
            mean,
            newton,
        }
    }

    /// Spectral radius of the shape operator.
    pub fn spectral_radius(&self) -> f64 {
        self.principal.iter().fold(0.0, |m, k| m.max(k.abs()))
    }
}

/// Per-sample curvature of a sampled hypersurface.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    dim: usize,
    points: Vec<PointCurvature>,
    sup_mean: f64,
    sup_second_form: f64,
}

impl CurvatureData {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[PointCurvature] {
        &self.points
    }

    /// `H_k` at every sample.
    pub fn mean_field(&self, k: usize) -> Vec<f64> {
        self.points.iter().map(|p| p.mean.h(k)).collect()
    }

    pub fn min_mean(&self, k: usize) -> f64 {
        self.points
            .iter()
            .map(|p| p.mean.h(k))
            .fold(f64::INFINITY, f64::min)
    }

    /// `‖H‖_∞`.
    pub fn sup_mean(&self) -> f64 {
        self.sup_mean
    }

    /// `‖B‖_∞`, the largest spectral radius of the shape operator.
    pub fn sup_second_form(&self) -> f64 {
        self.sup_second_form
    }

    pub fn positivity_tolerance(&self, j: usize) -> f64 {
        POSITIVITY_TOL * self.sup_second_form.max(1.0).powi(j as i32)
    }

    /// Fails unless `H_k > 0` at every sample.
    pub fn require_class(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.dim {
            return Err(Error::Domain(format!(
                "curvature order k = {k} outside 1..={}",
                self.dim
            )));
        }
        let min = self.min_mean(k);
        if min > self.positivity_tolerance(k) {
            Ok(())
        } else {
            Err(Error::ClassViolation { k, min })
        }
    }

    /// Smallest gap in `H_k^{1/k} ≤ … ≤ H₂^{1/2} ≤ H` over samples with `H_k > 0`.
    pub fn maclaurin_slack(&self, k: usize) -> f64 {
        let mut slack = f64::INFINITY;
        for p in &self.points {
            if p.mean.h(k) <= 0.0 {
                continue;
            }
            for j in 1..k {
                let lower = p.mean.h(j + 1).powf(1.0 / (j + 1) as f64);
                let upper = p.mean.h(j).powf(1.0 / j as f64);
                slack = slack.min(upper - lower);
            }
        }
        slack
    }

    /// `max |S − κ̄ Id|` over samples, `κ̄` the mean principal curvature.
    pub fn umbilicity_defect(&self) -> f64 {
        self.points
            .iter()
            .map(|p| {
                let n = p.shape_operator.nrows();
                (&p.shape_operator - DMatrix::identity(n, n) * p.mean.h(1))
                    .abs()
                    .max()
            })
            .fold(0.0, f64::max)
    }

    /// Largest Newton-trace disagreement over samples.
    pub fn newton_discrepancy(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.newton.discrepancy())
            .fold(0.0, f64::max)
    }
}

fn second_form_fd(surface: &SampledHypersurface, index: usize) -> Result<DMatrix<f64>> {
    let sample = &surface.samples()[index];
    let axes = surface.shape().axes();
    let n = axes.len();
    let mode = surface.grid().derivatives();
    let mut b = DMatrix::zeros(n, n);
    for (i, &kind) in axes.iter().enumerate() {
        // the normals are themselves differenced, so the outer step is widened to ε^{1/4}
        let h = fd_step(kind, sample.params[i]) * f64::EPSILON.powf(-1.0 / 12.0);
        let mut up = sample.params.clone();
        let mut down = sample.params.clone();
        up[i] += h;
        down[i] -= h;
        let dnu = (oriented_normal(surface, &up, mode)? - oriented_normal(surface, &down, mode)?)
            / (2.0 * h);
        for j in 0..n {
            b[(i, j)] = dnu.dot(&sample.frame.column(j));
        }
    }
    Ok((&b + b.transpose()) * 0.5)
}

fn second_form_analytic(normal: &DVector<f64>, hessian: &[DVector<f64>], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| -normal.dot(&hessian[i * n + j]))
}

/// Curvature data at every sample of `surface`.
pub fn second_fundamental_form(surface: &SampledHypersurface) -> Result<CurvatureData> {
    let n = surface.dim();
    let points: Vec<PointCurvature> = surface
        .samples()
        .par_iter()
        .enumerate()
        .map(|(index, sample)| {
            let b = match &sample.hessian {
                Some(h) => second_form_analytic(&sample.normal, h, n),
                None => second_form_fd(surface, index)?,
            };
            if b.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    quantity: "second fundamental form",
                    index,
                });
            }
            Ok(PointCurvature::from_forms(&sample.metric, b))
        })
        .collect::<Result<_>>()?;
    let sup_mean = points.iter().map(|p| p.mean.h(1).abs()).fold(0.0, f64::max);
    let sup_second_form = points
        .iter()
        .map(PointCurvature::spectral_radius)
        .fold(0.0, f64::max);
    Ok(CurvatureData {
        dim: n,
        points,
        sup_mean,
        sup_second_form,
    })
}

/// Curvature at arbitrary chart parameters of the surface's shape.
pub fn curvature_at(surface: &SampledHypersurface, params: &[f64]) -> Result<PointCurvature> {
    let n = surface.dim();
    let geom = local_geometry(surface.shape(), params, DerivativeMode::Analytic);
    let normal = oriented_normal(surface, params, DerivativeMode::Analytic)?;
    let metric = geom.frame.transpose() * &geom.frame;
    let hessian = geom
        .hessian
        .expect("analytic mode returns second derivatives");
    Ok(PointCurvature::from_forms(
        &metric,
        second_form_analytic(&normal, &hessian, n),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    /// `min H_j` over samples for `j = 1 … k`.
    pub min_mean: Vec<f64>,
    pub positive: Vec<bool>,
    /// `H_k > 0` implies `H_j > 0` for all `j ≤ k`; false only if observed violated.
    pub implication_holds: bool,
    /// Whether the surface belongs to the positive-`H_k` class.
    pub in_class: bool,
}

pub fn positivity_report(curv: &CurvatureData, k: usize) -> PositivityReport {
    let k = k.min(curv.dim());
    let min_mean: Vec<f64> = (1..=k).map(|j| curv.min_mean(j)).collect();
    let positive: Vec<bool> = min_mean
        .iter()
        .enumerate()
        .map(|(i, m)| *m > curv.positivity_tolerance(i + 1))
        .collect();
    let in_class = positive.last().copied().unwrap_or(false);
    let implication_holds = !in_class || positive.iter().all(|p| *p);
    PositivityReport {
        min_mean,
        positive,
        implication_holds,
        in_class,
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use proptest::prelude::*;

    use super::*;
    use crate::shapes::{sample_shape, GridSpec, ParametricShape};

    /// Subset enumeration, independent of the product-expansion recurrence.
    fn sigma_by_subsets(values: &[f64], k: usize) -> f64 {
        let n = values.len();
        (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| {
                (0..n)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| values[i])
                    .product::<f64>()
            })
            .sum()
    }

    #[test]
    fn mean_curvature_examples() {
        let mc = mean_curvatures(&[1.0, 2.0, 3.0]);
        assert_eq!(mc.sigma, vec![1.0, 6.0, 11.0, 6.0]);
        assert!((mc.h(1) - 2.0).abs() < 1e-15);
        assert!((mc.h(2) - 11.0 / 3.0).abs() < 1e-15);
        assert!((mc.h(3) - 6.0).abs() < 1e-15);
        assert_eq!(mc.h(0), 1.0);
        assert_eq!(mc.h(4), 0.0);

        let c: f64 = 1.7;
        let mc = mean_curvatures(&[c; 4]);
        for k in 0..=4 {
            assert!((mc.h(k) - c.powi(k as i32)).abs() < 1e-12);
        }

        let mc = mean_curvatures(&[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!((mc.h(1) - 0.2).abs() < 1e-15);
        assert!((2..=5).all(|k| mc.h(k) == 0.0));
    }

    #[test]
    fn permutation_symbol_examples() {
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0]));
        assert!((permutation_symbol_hk(&b, 2).unwrap() - 11.0 / 3.0).abs() < 1e-14);
        assert!((permutation_symbol_hk(&DMatrix::identity(3, 3), 3).unwrap() - 1.0).abs() < 1e-14);
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.5, -0.2, 0.5, 2.0, 0.3, -0.2, 0.3, -1.0]);
        assert!((permutation_symbol_hk(&m, 1).unwrap() - m.trace() / 3.0).abs() < 1e-14);
        assert!(permutation_symbol_hk(&DMatrix::identity(5, 5), 2).is_err());
    }

    #[test]
    fn newton_trace_examples() {
        let t = newton_traces_from_curvatures(&[1.0, 2.0, 3.0]);
        assert!((t.trace_identity[1] - 12.0).abs() < 1e-13);
        assert!((t.trace_recursion[1] - 12.0).abs() < 1e-13);
        assert!((t.contraction_identity[1] - 22.0).abs() < 1e-13);
        assert!((t.contraction_recursion[1] - 22.0).abs() < 1e-13);
        assert!((t.trace_identity[0] - 3.0).abs() < 1e-15);
        assert!((t.contraction_identity[0] - 6.0).abs() < 1e-13);
        assert_eq!(newton_normalization(3, 1), 6.0);
    }

    #[test]
    fn scalar_curvature_examples() {
        let e = SpaceForm::euclidean(3).unwrap();
        assert_eq!(scalar_curvature(&e, 2, 1.0), 2.0);
        assert_eq!(scalar_curvature(&e, 2, 0.0), 0.0);
        let s = SpaceForm::sphere(1.0, 3).unwrap();
        let rho: f64 = 0.6;
        let cot2 = (rho.cos() / rho.sin()).powi(2);
        assert!((scalar_curvature(&s, 2, cot2) - 2.0 / rho.sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn round_sphere_shape_operator() {
        let shape = ParametricShape::round_sphere(vec![0.0; 3], 2.0).unwrap();
        let s = sample_shape(&shape, &GridSpec::default_for(2)).unwrap();
        let curv = second_fundamental_form(&s).unwrap();
        for p in curv.points() {
            assert!(
                (&p.shape_operator - DMatrix::identity(2, 2) * 0.5)
                    .abs()
                    .max()
                    < 1e-7
            );
        }
        assert!(curv.umbilicity_defect() < 1e-6);
    }

    #[test]
    fn geodesic_sphere_principal_curvatures() {
        let shape =
            ParametricShape::geodesic_sphere(1.0, ParametricShape::north_pole(1.0, 2), FRAC_PI_4)
                .unwrap();
        let s = sample_shape(&shape, &GridSpec::default_for(2)).unwrap();
        let curv = second_fundamental_form(&s).unwrap();
        for p in curv.points() {
            for k in &p.principal {
                assert!((k - 1.0).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn ellipsoid_vertex_curvature() {
        let shape = ParametricShape::ellipsoid(vec![0.0; 3], vec![2.0, 1.0, 1.0]).unwrap();
        let s = sample_shape(&shape, &GridSpec::new(vec![16, 32]).unwrap()).unwrap();
        // z = 0, φ = 0 is the vertex (2, 0, 0)
        let p = curvature_at(&s, &[0.0, 0.0]).unwrap();
        assert!((s.shape().point(&[0.0, 0.0])[0] - 2.0).abs() < 1e-15);
        for k in &p.principal {
            assert!((k - 2.0).abs() < 1e-5, "{k}");
        }
    }

    #[test]
    fn finite_difference_second_form_matches_analytic() {
        use crate::shapes::DerivativeMode;
        let shape = ParametricShape::perturbed_sphere(vec![0.0; 3], 1.0, 0.2).unwrap();
        let grid = GridSpec::new(vec![16, 32]).unwrap();
        let a = second_fundamental_form(&sample_shape(&shape, &grid).unwrap()).unwrap();
        let f = second_fundamental_form(
            &sample_shape(
                &shape,
                &grid.with_derivatives(DerivativeMode::FiniteDifference),
            )
            .unwrap(),
        )
        .unwrap();
        for (pa, pf) in a.points().iter().zip(f.points()) {
            for (ka, kf) in pa.principal.iter().zip(&pf.principal) {
                assert!((ka - kf).abs() < 1e-4, "{ka} vs {kf}");
            }
        }
    }

    #[test]
    fn ellipsoid_positivity() {
        let shape = ParametricShape::ellipsoid(vec![0.0; 3], vec![2.0, 1.0, 1.0]).unwrap();
        let s = sample_shape(&shape, &GridSpec::new(vec![16, 32]).unwrap()).unwrap();
        let rep = positivity_report(&second_fundamental_form(&s).unwrap(), 2);
        assert!(rep.positive.iter().all(|p| *p) && rep.in_class && rep.implication_holds);
    }

    #[test]
    fn large_perturbation_leaves_the_positive_class() {
        let grid = GridSpec::new(vec![32, 64]).unwrap();
        let mut crossed = None;
        for step in 1..20 {
            let t = 0.05 * step as f64;
            let shape = ParametricShape::perturbed_sphere(vec![0.0; 3], 1.0, t).unwrap();
            let curv = second_fundamental_form(&sample_shape(&shape, &grid).unwrap()).unwrap();
            if curv.min_mean(2) <= 0.0 {
                crossed = Some(t);
                assert!(matches!(
                    curv.require_class(2),
                    Err(Error::ClassViolation { k: 2, .. })
                ));
                assert!(!positivity_report(&curv, 2).in_class);
                break;
            }
            curv.require_class(2).unwrap();
        }
        assert!(crossed.is_some());
    }

    fn symmetric(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
        prop::collection::vec(-3.0f64..3.0, n * n).prop_map(move |v| {
            let m = DMatrix::from_vec(n, n, v);
            (&m + m.transpose()) * 0.5
        })
    }

    proptest! {
        #[test]
        fn recurrence_matches_subset_enumeration(kappa in prop::collection::vec(-4.0f64..4.0, 1..7)) {
            let sigma = elementary_symmetric(&kappa);
            for (k, s) in sigma.iter().enumerate() {
                let oracle = sigma_by_subsets(&kappa, k);
                prop_assert!((s - oracle).abs() <= 1e-10 * (1.0 + oracle.abs()));
            }
        }

        #[test]
        fn product_expansion_coefficients(kappa in prop::collection::vec(-2.0f64..2.0, 1..6), s in -1.5f64..1.5) {
            let sigma = elementary_symmetric(&kappa);
            let poly: f64 = sigma.iter().enumerate().map(|(k, c)| c * s.powi(k as i32)).sum();
            let prod: f64 = kappa.iter().map(|k| 1.0 + s * k).product();
            prop_assert!((poly - prod).abs() < 1e-10 * (1.0 + prod.abs()));
        }

        #[test]
        fn permutation_oracle_agrees_2x2(m in symmetric(2)) {
            let eig = m.clone().symmetric_eigenvalues();
            let mc = mean_curvatures(eig.as_slice());
            for k in 1..=2 {
                prop_assert!((permutation_symbol_hk(&m, k).unwrap() - mc.h(k)).abs() < 1e-12 * (1.0 + mc.h(k).abs()));
            }
        }

        #[test]
        fn permutation_oracle_agrees_3x3(m in symmetric(3)) {
            let eig = m.clone().symmetric_eigenvalues();
            let mc = mean_curvatures(eig.as_slice());
            for k in 1..=3 {
                prop_assert!((permutation_symbol_hk(&m, k).unwrap() - mc.h(k)).abs() < 1e-12 * (1.0 + mc.h(k).abs()));
            }
        }

        #[test]
        fn newton_routes_agree(m in symmetric(4)) {
            prop_assert!(newton_traces(&m).discrepancy() < 1e-10);
        }
    }
}
