use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default threshold for the distortion predicate.
pub const DEFAULT_THETA: f64 = 0.5;
/// Default annulus/covering threshold, in multiples of the grid spacing.
pub const DEFAULT_EPSILON_SPACINGS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    /// Curvature order `k`.
    pub k: usize,
    /// Norm exponent; the pinching condition uses `2p`.
    pub p: f64,
    /// Rescale to unit volume before the analysis.
    pub normalize_volume: bool,
    /// Annulus and covering threshold; defaults to five grid spacings.
    pub epsilon: Option<f64>,
    /// Distortion threshold.
    pub theta: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            k: 2,
            p: 1.0,
            normalize_volume: false,
            epsilon: None,
            theta: DEFAULT_THETA,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > n {
            return Err(Error::Domain(format!(
                "curvature order k = {} must lie in 1..={n}",
                self.k
            )));
        }
        if !(self.p >= 1.0) {
            return Err(Error::Domain(format!(
                "norm exponent p = {} must be >= 1",
                self.p
            )));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::Domain(format!("epsilon must be positive, got {e}")));
            }
        }
        if !(self.theta > 0.0) || !self.theta.is_finite() {
            return Err(Error::Domain(format!(
                "theta must be positive, got {}",
                self.theta
            )));
        }
        Ok(())
    }

    pub fn epsilon_for(&self, grid_spacing: f64) -> f64 {
        self.epsilon
            .unwrap_or(DEFAULT_EPSILON_SPACINGS * grid_spacing)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let cfg = AnalysisConfig::default();
        assert!(cfg.validate(2).is_ok());
        assert!(AnalysisConfig {
            k: 3,
            ..cfg.clone()
        }
        .validate(2)
        .is_err());
        assert!(AnalysisConfig {
            k: 0,
            ..cfg.clone()
        }
        .validate(2)
        .is_err());
        assert!(AnalysisConfig {
            p: 0.5,
            ..cfg.clone()
        }
        .validate(2)
        .is_err());
        assert!(AnalysisConfig {
            epsilon: Some(-1.0),
            ..cfg.clone()
        }
        .validate(2)
        .is_err());
        assert_eq!(cfg.epsilon_for(0.1), 0.5);
    }
}
