//! Extrinsic radius: the smallest ball of the ambient space form containing
//! the surface.

mod euclidean;
mod spherical;

use rayon::prelude::*;

pub use euclidean::{euclidean_miniball, SUPPORT_RANK_TOL};
pub use spherical::{spherical_miniball, HEMISPHERE_MARGIN, WOLFE_GAP_TOL};

use crate::error::{Error, Result};
use crate::shapes::{AxisKind, ParametricShape, SampledHypersurface};
use crate::spaceform::{AmbientPoint, SpaceForm};

/// Largest ambient dimension accepted by the Euclidean solver.
pub const MAX_EUCLIDEAN_DIM: usize = 8;
/// Number of farthest samples used as seeds for continuous refinement.
pub const REFINEMENT_SEEDS: usize = 32;
const MAX_REFINEMENT_ROUNDS: usize = 12;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverStats {
    pub iterations: usize,
    /// Largest `|R − d(p₀, x)|` over support points.
    pub residual: f64,
    /// Rounds of contact refinement through the chart.
    pub refinements: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: AmbientPoint,
    /// Geodesic radius.
    pub radius: f64,
    /// Indices of the points determining the ball.
    pub support: Vec<usize>,
    pub stats: SolverStats,
    /// Samples within grid tolerance of the boundary sphere (surface runs only).
    pub contact: Vec<usize>,
}

impl Ball {
    /// Largest distance from the center to any of `points`.
    pub fn max_distance(&self, space: &SpaceForm, points: &[AmbientPoint]) -> f64 {
        points
            .iter()
            .map(|p| space.geodesic_distance(&self.center, p))
            .fold(0.0, f64::max)
    }
}

/// Smallest enclosing ball of `points` in `space`.
pub fn enclose_points(space: &SpaceForm, points: &[AmbientPoint], seed: u64) -> Result<Ball> {
    let ball = if space.is_euclidean() {
        euclidean_miniball(points, seed)?
    } else {
        spherical_miniball(points, space.delta())?
    };
    check_hemisphere(space, ball.radius)?;
    Ok(ball)
}

fn check_hemisphere(space: &SpaceForm, radius: f64) -> Result<()> {
    let limit = space.hemisphere_limit();
    if radius < limit {
        Ok(())
    } else {
        Err(Error::HemisphereViolation { radius, limit })
    }
}

/// Local maximizer of the distance to `center` over the chart, by compass search from `start`.
fn farthest_point_near(
    shape: &ParametricShape,
    space: &SpaceForm,
    center: &AmbientPoint,
    start: &[f64],
    nodes: &[usize],
) -> (Vec<f64>, AmbientPoint, f64) {
    let axes = shape.axes();
    let clamp = |kind: AxisKind, u: f64| {
        let (lo, hi) = kind.bounds();
        if kind.is_periodic() {
            u.rem_euclid(hi - lo)
        } else {
            u.clamp(lo, hi)
        }
    };
    let mut params = start.to_vec();
    let mut point = shape.point(&params);
    let mut best = space.geodesic_distance(center, &point);
    let mut steps: Vec<f64> = axes
        .iter()
        .zip(nodes)
        .map(|(k, &m)| (k.bounds().1 - k.bounds().0) / m as f64)
        .collect();
    let floors: Vec<f64> = axes
        .iter()
        .map(|k| 1e-10 * (k.bounds().1 - k.bounds().0))
        .collect();
    while steps.iter().zip(&floors).any(|(s, f)| s > f) {
        let mut improved = false;
        for a in 0..axes.len() {
            for sign in [1.0, -1.0] {
                let mut trial = params.clone();
                trial[a] = clamp(axes[a], trial[a] + sign * steps[a]);
                let p = shape.point(&trial);
                let d = space.geodesic_distance(center, &p);
                if d > best {
                    best = d;
                    params = trial;
                    point = p;
                    improved = true;
                }
            }
        }
        if !improved {
            for s in &mut steps {
                *s *= 0.5;
            }
        }
    }
    (params, point, best)
}

/// Extrinsic radius of a sampled surface.
///
/// The ball of the samples is refined against the continuous chart: distance
/// maxima near the farthest samples are located by local search, added to the
/// point set, and the ball is recomputed until no point of the surface found
/// this way lies outside it. The center becomes the surface's base point.
pub fn extrinsic_radius(surface: &mut SampledHypersurface, seed: u64) -> Result<Ball> {
    let space = surface.space();
    let shape = surface.shape().clone();
    let nodes = surface.grid().effective_nodes();
    let mut points = surface.positions();
    let n_samples = points.len();
    let mut origin: Vec<usize> = (0..n_samples).collect();
    let mut ball = enclose_points(&space, &points, seed)?;
    let tol = 1e-11 * ball.radius.max(1.0);
    let mut rounds = 0;
    for _ in 0..MAX_REFINEMENT_ROUNDS {
        let center = ball.center.clone();
        let mut order: Vec<(usize, f64)> = surface.samples()[..]
            .iter()
            .enumerate()
            .map(|(i, s)| (i, space.geodesic_distance(&center, &s.position)))
            .collect();
        order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        order.truncate(REFINEMENT_SEEDS);
        let found: Vec<(usize, AmbientPoint, f64)> = order
            .par_iter()
            .map(|&(i, _)| {
                let (_, p, d) = farthest_point_near(
                    &shape,
                    &space,
                    &center,
                    &surface.samples()[i].params,
                    &nodes,
                );
                (i, p, d)
            })
            .collect();
        let worst = found.iter().map(|f| f.2).fold(0.0, f64::max);
        if worst <= ball.radius + tol {
            break;
        }
        rounds += 1;
        for (i, p, _) in found {
            points.push(space.normalize_point(&p));
            origin.push(i);
        }
        ball = enclose_points(&space, &points, seed)?;
    }
    let mut support: Vec<usize> = ball.support.iter().map(|&i| origin[i]).collect();
    support.sort_unstable();
    support.dedup();
    ball.support = support;
    ball.stats.refinements = rounds;
    surface.set_base_point(ball.center.clone())?;
    let h = surface.grid_spacing();
    let contact_tol = (h * h / ball.radius.max(f64::MIN_POSITIVE)).max(1e-9);
    ball.contact = surface
        .samples()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.radial.r > ball.radius - contact_tol)
        .map(|(i, _)| i)
        .collect();
    Ok(ball)
}

#[cfg(test)]
mod tests;
