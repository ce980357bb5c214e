//! Smallest enclosing ball in ℝᵈ by Welzl's algorithm with move-to-front.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Ball, SolverStats, MAX_EUCLIDEAN_DIM};
use crate::error::{Error, Result};
use crate::spaceform::AmbientPoint;

/// Relative threshold below which singular values of a support system are dropped.
pub const SUPPORT_RANK_TOL: f64 = 1e-12;

/// Smallest ball whose boundary passes through every point of `support`,
/// restricted to their affine hull. Returns the center.
pub(crate) fn circumcenter(support: &[&AmbientPoint], scale: f64) -> AmbientPoint {
    let s0 = support[0];
    let m = support.len() - 1;
    if m == 0 {
        return s0.clone();
    }
    let diffs: Vec<DVector<f64>> = support[1..].iter().map(|s| *s - s0).collect();
    let gram = DMatrix::from_fn(m, m, |i, j| 2.0 * diffs[i].dot(&diffs[j]));
    let rhs = DVector::from_fn(m, |i, _| diffs[i].norm_squared());
    let svd = gram.svd(true, true);
    let threshold = SUPPORT_RANK_TOL * scale * scale;
    let lambda = svd
        .solve(&rhs, threshold)
        .expect("both factors were computed");
    let mut center = s0.clone();
    for (l, d) in lambda.iter().zip(&diffs) {
        center += d * *l;
    }
    center
}

struct Welzl<'a> {
    points: &'a [AmbientPoint],
    order: Vec<usize>,
    support: Vec<usize>,
    ball_support: Vec<usize>,
    center: AmbientPoint,
    radius: f64,
    dim: usize,
    tol: f64,
    scale: f64,
    iterations: usize,
}

impl Welzl<'_> {
    fn set_ball_from_support(&mut self) {
        self.ball_support.clone_from(&self.support);
        if self.support.is_empty() {
            self.center = DVector::zeros(self.dim);
            self.radius = -1.0;
            return;
        }
        let pts: Vec<&AmbientPoint> = self.support.iter().map(|&i| &self.points[i]).collect();
        self.center = circumcenter(&pts, self.scale);
        self.radius = pts
            .iter()
            .map(|p| (*p - &self.center).norm())
            .fold(0.0, f64::max);
    }

    fn outside(&self, i: usize) -> bool {
        (&self.points[i] - &self.center).norm() > self.radius + self.tol
    }

    /// Move-to-front recursion over the prefix `order[..end]`; depth is at most `d + 1`.
    fn run(&mut self, end: usize) {
        self.iterations += 1;
        self.set_ball_from_support();
        if self.support.len() == self.dim + 1 {
            return;
        }
        for pos in 0..end {
            let i = self.order[pos];
            if self.outside(i) {
                self.support.push(i);
                self.run(pos);
                self.support.pop();
                self.order[..=pos].rotate_right(1);
            }
        }
    }
}

/// Smallest enclosing ball of `points` in ℝᵈ, `d ≤ 8`.
///
/// The points are visited in an order shuffled by `seed`, so the result is
/// deterministic for a fixed seed and input order.
pub fn euclidean_miniball(points: &[AmbientPoint], seed: u64) -> Result<Ball> {
    let first = points
        .first()
        .ok_or_else(|| Error::Degenerate("no points to enclose".into()))?;
    let dim = first.len();
    if dim == 0 || dim > MAX_EUCLIDEAN_DIM {
        return Err(Error::Dimension(format!(
            "ambient dimension {dim} outside 1..={MAX_EUCLIDEAN_DIM}"
        )));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Dimension("points have mixed dimensions".into()));
    }
    if points.iter().any(|p| p.iter().any(|v| !v.is_finite())) {
        return Err(Error::NonFinite {
            quantity: "point coordinate",
            index: 0,
        });
    }
    let mut lo = first.clone();
    let mut hi = first.clone();
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let scale = (hi - lo).norm().max(f64::MIN_POSITIVE);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut w = Welzl {
        points,
        order,
        support: Vec::with_capacity(dim + 1),
        ball_support: Vec::new(),
        center: DVector::zeros(dim),
        radius: -1.0,
        dim,
        tol: 1e-13 * scale,
        scale,
        iterations: 0,
    };
    w.run(points.len());
    let center = w.center.clone();
    let radius = points
        .iter()
        .map(|p| (p - &center).norm())
        .fold(0.0, f64::max);
    let mut support = w.ball_support.clone();
    support.sort_unstable();
    let residual = support
        .iter()
        .map(|&i| (radius - (&points[i] - &center).norm()).abs())
        .fold(0.0, f64::max);
    Ok(Ball {
        center,
        radius,
        support,
        stats: SolverStats {
            iterations: w.iterations,
            residual,
            refinements: 0,
        },
        contact: Vec::new(),
    })
}
