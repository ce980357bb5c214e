//! Integrals and Lᵖ norms over a sampled hypersurface.

use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, weighted_sum};
use crate::shapes::SampledHypersurface;

/// `∫ f dv` with the quadrature weights of the samples.
pub fn integrate(field: &[f64], weights: &[f64]) -> f64 {
    weighted_sum(weights, field)
}

/// `(Σ wᵢ |fᵢ|ᵖ)^{1/p}`; `p = ∞` gives `max |fᵢ|`.
pub fn lp_norm(field: &[f64], p: f64, weights: &[f64]) -> Result<f64> {
    if field.len() != weights.len() {
        return Err(Error::Dimension(format!(
            "{} values for {} weights",
            field.len(),
            weights.len()
        )));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!(
            "norm exponent must be >= 1, got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(sup_norm(field));
    }
    let terms: Vec<f64> = field
        .iter()
        .zip(weights)
        .map(|(f, w)| w * f.abs().powf(p))
        .collect();
    Ok(pairwise_sum(&terms).powf(1.0 / p))
}

pub fn sup_norm(field: &[f64]) -> f64 {
    field.iter().fold(0.0, |m, f| m.max(f.abs()))
}

/// Total `n`-volume of the surface.
pub fn volume(surface: &SampledHypersurface) -> f64 {
    surface.volume()
}
