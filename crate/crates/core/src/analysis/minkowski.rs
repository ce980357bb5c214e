//! Iterated Hsiung–Minkowski integrals.

use rayon::prelude::*;
use serde::Serialize;

use super::norms::integrate;
use crate::curvature::CurvatureData;
use crate::error::Result;
use crate::shapes::SampledHypersurface;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinkowskiGap {
    pub j: usize,
    /// `∫ H_j s_δ(r) dv`.
    pub weighted_mean: f64,
    /// `∫ H_{j−1} c_δ(r) dv`.
    pub weighted_lower: f64,
    /// Difference of the two, nonnegative in the positive class.
    pub gap: f64,
}

/// `G_j = ∫H_j s_δ(r) − ∫H_{j−1} c_δ(r)` for `j = 1 … k`, about the surface's base point.
pub fn minkowski_gaps(
    surface: &SampledHypersurface,
    curv: &CurvatureData,
    k: usize,
) -> Result<Vec<MinkowskiGap>> {
    curv.require_class(k)?;
    let space = surface.space();
    let weights = surface.weights();
    let (s, c): (Vec<f64>, Vec<f64>) = surface
        .samples()
        .par_iter()
        .map(|x| (space.sin_d(x.radial.r), space.cos_d(x.radial.r)))
        .unzip();
    Ok((1..=k)
        .map(|j| {
            let hj: Vec<f64> = curv
                .mean_field(j)
                .iter()
                .zip(&s)
                .map(|(h, s)| h * s)
                .collect();
            let hj1: Vec<f64> = curv
                .mean_field(j - 1)
                .iter()
                .zip(&c)
                .map(|(h, c)| h * c)
                .collect();
            let weighted_mean = integrate(&hj, &weights);
            let weighted_lower = integrate(&hj1, &weights);
            MinkowskiGap {
                j,
                weighted_mean,
                weighted_lower,
                gap: weighted_mean - weighted_lower,
            }
        })
        .collect())
}
