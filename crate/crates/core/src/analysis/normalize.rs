//! Homothety to unit volume.

use crate::enclosing::Ball;
use crate::error::{Error, Result};
use crate::shapes::SampledHypersurface;

/// Factor `λ = V^{-1/n}` of the homothety `x ↦ λx` that gives the surface unit volume.
pub fn unit_volume_factor(surface: &SampledHypersurface) -> Result<f64> {
    let v = surface.volume();
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Degenerate(format!(
            "cannot normalize a surface of volume {v}"
        )));
    }
    Ok(v.powf(-1.0 / surface.dim() as f64))
}

/// The surface rescaled to unit volume, with the factor used.
///
/// The ambient curvature changes to `δ V^{2/n}` and `H_k` to `V^{k/n} H_k`.
pub fn normalize_to_unit_volume(
    surface: &SampledHypersurface,
) -> Result<(SampledHypersurface, f64)> {
    let factor = unit_volume_factor(surface)?;
    if factor == 1.0 {
        return Ok((surface.clone(), 1.0));
    }
    Ok((surface.scaled(factor)?, factor))
}

/// Image of a ball under the homothety `x ↦ λx`.
pub fn scale_ball(ball: &Ball, factor: f64) -> Ball {
    Ball {
        center: &ball.center * factor,
        radius: ball.radius * factor,
        ..ball.clone()
    }
}
