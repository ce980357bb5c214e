//! Smallest enclosing geodesic ball on a round sphere.
//!
//! For unit vectors contained in an open hemisphere, the center maximizing
//! `min_i ⟨xᵢ, c⟩` is the direction of the minimum-norm point of their convex
//! hull, found here by Wolfe's active-set algorithm.

use nalgebra::{DMatrix, DVector};

use super::{Ball, SolverStats};
use crate::error::{Error, Result};
use crate::spaceform::AmbientPoint;

/// Stopping tolerance on the Wolfe duality gap `|q|² − minᵢ⟨q, xᵢ⟩`.
pub const WOLFE_GAP_TOL: f64 = 1e-11;
/// Hull distances at or below this value mean no open hemisphere contains the points.
pub const HEMISPHERE_MARGIN: f64 = 1e-9;
const WEIGHT_FLOOR: f64 = 1e-15;

/// Barycentric weights of the point of minimal norm in the affine hull of `pts`.
fn affine_minimizer(pts: &[&DVector<f64>]) -> DVector<f64> {
    let m = pts.len();
    let mut kkt = DMatrix::zeros(m + 1, m + 1);
    for i in 0..m {
        for j in 0..m {
            kkt[(i, j)] = pts[i].dot(pts[j]);
        }
        kkt[(i, m)] = 1.0;
        kkt[(m, i)] = 1.0;
    }
    let mut rhs = DVector::zeros(m + 1);
    rhs[m] = 1.0;
    let svd = kkt.svd(true, true);
    let sol = svd.solve(&rhs, 1e-14).expect("both factors were computed");
    sol.rows(0, m).into_owned()
}

struct ActiveSet {
    indices: Vec<usize>,
    weights: Vec<f64>,
}

impl ActiveSet {
    fn point(&self, units: &[DVector<f64>]) -> DVector<f64> {
        let mut q = DVector::zeros(units[0].len());
        for (&i, &w) in self.indices.iter().zip(&self.weights) {
            q += &units[i] * w;
        }
        q
    }

    fn prune(&mut self) {
        let keep: Vec<bool> = self.weights.iter().map(|w| *w > WEIGHT_FLOOR).collect();
        let mut k = keep.iter();
        self.indices.retain(|_| *k.next().expect("same length"));
        self.weights.retain(|w| *w > WEIGHT_FLOOR);
        let total: f64 = self.weights.iter().sum();
        for w in &mut self.weights {
            *w /= total;
        }
    }
}

/// Minimum-norm point of `conv{units}`: returns the active set and the number of major iterations.
fn wolfe(units: &[DVector<f64>]) -> Result<(ActiveSet, usize, f64)> {
    let mut set = ActiveSet {
        indices: vec![0],
        weights: vec![1.0],
    };
    let max_major = 50 * units.len() + 100;
    for major in 1..=max_major {
        let q = set.point(units);
        let q2 = q.norm_squared();
        let (j, min_dot) = units.iter().enumerate().map(|(i, u)| (i, u.dot(&q))).fold(
            (0, f64::INFINITY),
            |best, cur| if cur.1 < best.1 { cur } else { best },
        );
        let gap = q2 - min_dot;
        if gap <= WOLFE_GAP_TOL || set.indices.contains(&j) {
            return Ok((set, major, gap.max(0.0)));
        }
        set.indices.push(j);
        set.weights.push(0.0);
        loop {
            let pts: Vec<&DVector<f64>> = set.indices.iter().map(|&i| &units[i]).collect();
            let alpha = affine_minimizer(&pts);
            if alpha.iter().all(|a| *a > WEIGHT_FLOOR) {
                set.weights = alpha.iter().copied().collect();
                break;
            }
            let mut theta = 1.0f64;
            for (l, a) in set.weights.iter().zip(alpha.iter()) {
                if *a <= WEIGHT_FLOOR && l - a > 0.0 {
                    theta = theta.min(l / (l - a));
                }
            }
            for (l, a) in set.weights.iter_mut().zip(alpha.iter()) {
                *l += theta * (a - *l);
            }
            set.prune();
            if set.indices.len() <= 1 {
                if set.indices.is_empty() {
                    set.indices.push(j);
                    set.weights.push(1.0);
                }
                break;
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "minimum-norm point did not converge in {max_major} iterations"
    )))
}

/// Smallest enclosing geodesic ball of points on the sphere `|x|² = 1/δ`.
pub fn spherical_miniball(points: &[AmbientPoint], delta: f64) -> Result<Ball> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::NegativeCurvature(delta));
    }
    let first = points
        .first()
        .ok_or_else(|| Error::Degenerate("no points to enclose".into()))?;
    let k = delta.sqrt();
    let mut units = Vec::with_capacity(points.len());
    for (index, p) in points.iter().enumerate() {
        if p.len() != first.len() {
            return Err(Error::Dimension("points have mixed dimensions".into()));
        }
        let u = p * k;
        let norm_sq = u.norm_squared();
        if !norm_sq.is_finite() {
            return Err(Error::NonFinite {
                quantity: "point coordinate",
                index,
            });
        }
        if (norm_sq - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "point {index} is off the sphere: |√δ x|² = {norm_sq}"
            )));
        }
        units.push(u / norm_sq.sqrt());
    }
    let (set, iterations, _gap) = wolfe(&units)?;
    let q = set.point(&units);
    let dist = q.norm();
    if dist <= HEMISPHERE_MARGIN {
        return Err(Error::NotHemisphere(dist));
    }
    let c = q / dist;
    let chord_angle = |u: &DVector<f64>| 2.0 * ((u - &c).norm() / 2.0).min(1.0).asin();
    let angle = units.iter().map(chord_angle).fold(0.0, f64::max);
    let mut support = set.indices.clone();
    support.sort_unstable();
    let residual = support
        .iter()
        .map(|&i| (angle - chord_angle(&units[i])).abs())
        .fold(0.0, f64::max)
        / k;
    Ok(Ball {
        center: c / k,
        radius: angle / k,
        support,
        stats: SolverStats {
            iterations,
            residual,
            refinements: 0,
        },
        contact: Vec::new(),
    })
}
